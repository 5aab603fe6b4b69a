// Acceptance suite: one checkable criterion per section, each printed as a
// single pass/fail line with its measured runtime. Run with no arguments for
// the full suite or with criterion numbers to select a subset.
#include "visolve/bench.hpp"
#include "visolve/problems.hpp"
#include "visolve/rng.hpp"
#include "visolve/sets.hpp"
#include "visolve/solvers.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

using namespace visolve;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) return "<missing " + p.string() + ">";
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path out_root() { return fs::path("acceptance_out"); }

// ---------------------------------------------------------------------------
// 1. Projector optimality on random cases, plus oracle equivalence for the
//    cyclic polyhedron projector.
Outcome criterion1() {
    SplitMix64 rng(1001);
    long checked = 0;
    Real worst_opt = 0.0;

    auto check_a22 = [&](const FeasibleSet& set, const Vector& x,
                         const std::function<Vector(SplitMix64&)>& feasible) {
        const Vector px = project(set, x).point;
        for (int q = 0; q < 10; ++q) {
            const Vector y = feasible(rng);
            const Real v = (x - px).dot(px - y);
            const Real scale = 1.0 + (x - px).norm() * (px - y).norm();
            worst_opt = std::min(worst_opt, v / scale);
            if (v < -1e-10 * scale) return false;
        }
        ++checked;
        return true;
    };

    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);

        {
            const FeasibleSet s = FeasibleSet::whole_space(n);
            if (!check_a22(s, uniform_vector(rng, n, -10, 10),
                           [n](SplitMix64& r) { return uniform_vector(r, n, -10, 10); }))
                return {false, "whole-space optimality violated"};
        }
        {
            const Vector lo = uniform_vector(rng, n, -5, 0);
            const Vector hi = uniform_vector(rng, n, 0, 5);
            const FeasibleSet s = FeasibleSet::box(lo, hi);
            if (!check_a22(s, uniform_vector(rng, n, -10, 10),
                           [lo, hi, n](SplitMix64& r) {
                               Vector v(n);
                               for (Index i = 0; i < n; ++i)
                                   v[i] = r.uniform(lo[i], hi[i]);
                               return v;
                           }))
                return {false, "box optimality violated"};
        }
        {
            Vector g = uniform_vector(rng, n, -2, 2);
            if (g.norm() < 0.1) g[0] += 1.0;
            const Vector y0 = uniform_vector(rng, n, -3, 3);
            const FeasibleSet s = FeasibleSet::halfspace(g, y0);
            if (!check_a22(s, uniform_vector(rng, n, -10, 10),
                           [g, y0, n](SplitMix64& r) {
                               return project_halfspace(g, y0,
                                                        uniform_vector(r, n, -10, 10));
                           }))
                return {false, "halfspace optimality violated"};
        }
        {
            const Vector w = moment_weights(n);
            const Real level = rng.uniform(-3, 3);
            const FeasibleSet s = FeasibleSet::moment_hyperplane(w, level);
            if (!check_a22(s, uniform_vector(rng, n, -10, 10),
                           [w, level, n](SplitMix64& r) {
                               return project_hyperplane(
                                   w, level, uniform_vector(r, n, -10, 10));
                           }))
                return {false, "moment-hyperplane optimality violated"};
        }
    }

    Real worst_gap = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 5);
        const Index k = 1 + static_cast<Index>(rng.next_u64() % 5);
        Matrix b_c = uniform_matrix(rng, k, n, -1, 1);
        for (Index i = 0; i < k; ++i)
            if (b_c.row(i).norm() < 1e-3) b_c(i, 0) += 1.0;
        const Vector b = uniform_vector(rng, k, 0, 1);
        const Vector x = uniform_vector(rng, n, -3, 3);
        const ProjectionReport got = project_polyhedron_dykstra(b_c, b, x);
        const Vector want = testing::polyhedron_projection_oracle(b_c, b, x);
        const Real gap = (got.point - want).norm() / (1.0 + want.norm());
        worst_gap = std::max(worst_gap, gap);
        if (!got.exact || gap > 1e-7)
            return {false, "polyhedron projector deviates from the oracle by " +
                               std::to_string(gap)};
    }
    std::ostringstream d;
    d << checked << " optimality cases, worst margin " << worst_opt
      << "; polyhedron worst oracle gap " << worst_gap;
    return {true, d.str()};
}

// ---------------------------------------------------------------------------
// 2. Invariant suite in checked mode over the random affine benchmark.
Outcome criterion2() {
    long runs = 0, converged = 0, violations = 0;
    for (Index m : {10, 20}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const ProblemInstance inst = gen_harker_pang({m, 30, seed});
            SolverConfig cfg;
            cfg.stop_rule = StopRule::norm_to_zero;
            cfg.tol = 1e-3;
            cfg.max_iter = 100000;
            SolveOptions opts;
            opts.check_mode = CheckMode::checked;
            const RunTrace t = solve(inst.op, inst.feasible, Method::alg1, cfg,
                                     inst.x1, inst.known, opts);
            ++runs;
            if (t.status == RunStatus::converged ||
                t.status == RunStatus::exact_solution_found)
                ++converged;
            violations += static_cast<long>(t.violations.size());
        }
    }
    std::ostringstream d;
    d << runs << " checked runs, " << converged << " converged, " << violations
      << " invariant violations";
    return {converged == runs && violations == 0, d.str()};
}

// ---------------------------------------------------------------------------
// 3. Directional iteration-count comparison over 20 seeds.
bench::ExperimentConfig comparison_sweep_config(const std::string& out_dir) {
    bench::ExperimentConfig cfg = bench::parse_config(R"({
        "problem": {"family": "harker_pang", "m_dim": 10, "k_cons": 30,
                     "seeds": [1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20]},
        "methods": [{"name": "alg1", "max_iter": 100000},
                    {"name": "sem", "max_iter": 100000},
                    {"name": "isem", "max_iter": 100000}],
        "stop_rule": "norm_to_zero",
        "tol": 1e-3,
        "mode": "fast"
    })");
    cfg.out_dir = out_dir;
    return cfg;
}

Outcome criterion3() {
    const auto cfg = comparison_sweep_config((out_root() / "c3").string());
    const bench::ExperimentResult res = bench::run_experiment(cfg);
    std::map<std::string, bench::SummaryRow> rows;
    for (const auto& r : res.rows) rows[r.method] = r;
    for (const char* m : {"alg1", "sem", "isem"}) {
        if (!rows.count(m)) return {false, std::string("missing row for ") + m};
        const auto& r = rows[m];
        if (r.converged < 19) // >= 95% of 20 seeds
            return {false, std::string(m) + " converged on only " +
                               std::to_string(r.converged) + "/20 seeds"};
    }
    const Real med_a = rows["alg1"].iterations.median;
    const Real med_s = rows["sem"].iterations.median;
    const Real med_i = rows["isem"].iterations.median;
    std::ostringstream d;
    d << "median iterations alg1=" << med_a << " sem=" << med_s
      << " isem=" << med_i;
    const bool ok = med_a <= med_s / 3.0 && med_a <= med_i / 3.0;
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// 4. Backtracking-base trend on the oligopoly benchmark.
Outcome criterion4() {
    std::map<Real, Real> medians;
    for (Real gamma : {0.01, 0.1, 0.5, 0.8}) {
        std::vector<Real> iters;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const ProblemInstance inst = gen_nash_cournot(10, seed);
            SolverConfig cfg;
            cfg.gamma = gamma;
            cfg.stop_rule = StopRule::step_diff;
            cfg.tol = 1e-2;
            cfg.max_iter = 100000;
            SolveOptions opts;
            opts.check_mode = CheckMode::fast;
            const RunTrace t = solve(inst.op, inst.feasible, Method::alg1, cfg,
                                     inst.x1, inst.known, opts);
            if (t.status != RunStatus::converged &&
                t.status != RunStatus::exact_solution_found)
                return {false, "run did not converge at gamma " +
                                   std::to_string(gamma)};
            iters.push_back(static_cast<Real>(t.records.size()));
        }
        medians[gamma] = bench::compute_stats(iters).median;
    }
    std::ostringstream d;
    d << "median iterations by gamma: 0.01 -> " << medians[0.01] << ", 0.1 -> "
      << medians[0.1] << ", 0.5 -> " << medians[0.5] << ", 0.8 -> "
      << medians[0.8];
    const bool ok = medians[0.01] > medians[0.1] && medians[0.1] > medians[0.5];
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// 5. Scalar exponential problem reaches its known solution.
Outcome criterion5() {
    const ProblemInstance inst = gen_exponential();
    SolverConfig cfg;
    cfg.stop_rule = StopRule::norm_to_zero;
    cfg.tol = 1e-6;
    cfg.max_iter = 500;
    const RunTrace t = solve(inst.op, inst.feasible, Method::alg1, cfg, inst.x1,
                             inst.known);
    std::ostringstream d;
    d << "status " << to_string(t.status) << " after " << t.records.size()
      << " iterations, |x| = " << std::abs(t.final_point[0]);
    const bool ok = (t.status == RunStatus::converged ||
                     t.status == RunStatus::exact_solution_found) &&
                    std::abs(t.final_point[0]) <= 1e-6 &&
                    t.records.size() <= 500;
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// 6. Cumulative-integration benchmark drives its residual to 1e-4.
Outcome criterion6() {
    const ProblemInstance inst = gen_volterra(100);
    SolverConfig cfg;
    cfg.stop_rule = StopRule::residual;
    cfg.tol = 1e-4;
    cfg.max_iter = 10000;
    const RunTrace t = solve(inst.op, inst.feasible, Method::alg1, cfg, inst.x1,
                             inst.known);
    std::ostringstream d;
    d << "status " << to_string(t.status) << " after " << t.records.size()
      << " iterations";
    if (!t.records.empty())
        d << ", final residual " << t.records.back().residual
          << ", final ||x_next - w|| " << t.records.back().dist_to_w;
    if (!t.diagnostic.empty()) d << " (" << t.diagnostic << ")";
    const bool ok = t.status == RunStatus::converged && !t.records.empty() &&
                    t.records.back().residual <= 1e-4 &&
                    t.records.back().dist_to_w <= 1e-3;
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// 7. Baseline degeneracy: zero inertia is bit-identical to the baseline, and
//    the zero-inertia cut method passes the same invariant suite.
Outcome criterion7() {
    SplitMix64 rng(7007);
    for (int rep = 0; rep < 1000; ++rep) {
        const Index n = 2 + static_cast<Index>(rng.next_u64() % 6);
        const Matrix bf = uniform_matrix(rng, n, n, -1, 1);
        const Matrix g = uniform_matrix(rng, n, n, -1, 1);
        Matrix m = bf * bf.transpose() + 0.5 * (g - g.transpose());
        for (Index i = 0; i < n; ++i) m(i, i) += rng.uniform(0.5, 1.5);
        const Operator f = make_affine_operator(m, Vector::Zero(n));
        const Index k = 1 + static_cast<Index>(rng.next_u64() % 5);
        Matrix b_c = uniform_matrix(rng, k, n, -1, 1);
        for (Index i = 0; i < k; ++i)
            if (b_c.row(i).norm() < 1e-3) b_c(i, 0) += 1.0;
        const FeasibleSet set =
            FeasibleSet::polyhedron(b_c, uniform_vector(rng, k, 0, 1));

        SolverState st;
        st.x_prev = uniform_vector(rng, n, -2, 2);
        st.x_curr = uniform_vector(rng, n, -2, 2);
        st.n = 1;
        const Real lambda = rng.uniform(0.001, 0.05);
        const SolverState got = step_isem(f, set, st, lambda, 0.0);
        const Vector want = step_sem(f, set, st.x_curr, lambda);
        if (got.x_curr.size() != want.size())
            return {false, "dimension mismatch in step comparison"};
        if (std::memcmp(got.x_curr.data(), want.data(),
                        sizeof(Real) * static_cast<std::size_t>(want.size())) != 0)
            return {false, "zero-inertia step differs from the baseline at rep " +
                               std::to_string(rep)};
    }

    long runs = 0, converged = 0, violations = 0;
    for (Index m : {10, 20}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const ProblemInstance inst = gen_harker_pang({m, 30, seed});
            SolverConfig cfg;
            cfg.stop_rule = StopRule::norm_to_zero;
            cfg.tol = 1e-3;
            cfg.max_iter = 100000;
            SolveOptions opts;
            opts.check_mode = CheckMode::checked;
            const RunTrace t = solve(inst.op, inst.feasible, Method::alg1_noinertia,
                                     cfg, inst.x1, inst.known, opts);
            ++runs;
            if (t.status == RunStatus::converged) ++converged;
            violations += static_cast<long>(t.violations.size());
        }
    }
    std::ostringstream d;
    d << "1000 bit-identical baseline steps; zero-inertia invariant sweep: "
      << converged << "/" << runs << " converged, " << violations
      << " violations";
    return {converged == runs && violations == 0, d.str()};
}

// ---------------------------------------------------------------------------
// 8. Repeating the comparison sweep reproduces every CSV byte.
Outcome criterion8() {
    const fs::path d1 = out_root() / "c8_run1";
    const fs::path d2 = out_root() / "c8_run2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    bench::run_experiment(comparison_sweep_config(d1.string()));
    bench::run_experiment(comparison_sweep_config(d2.string()));

    long compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
        if (entry.path().extension() != ".csv") continue;
        const fs::path other = d2 / entry.path().filename();
        if (slurp(entry.path()) != slurp(other))
            return {false, "CSV bytes differ for " + entry.path().filename().string()};
        ++compared;
    }
    if (compared == 0) return {false, "no CSV artifacts produced"};
    // summary.json carries no wall-clock data and must reproduce as well.
    if (slurp(d1 / "summary.json") != slurp(d2 / "summary.json"))
        return {false, "summary.json differs between repeats"};
    std::ostringstream d;
    d << compared << " CSV artifacts byte-identical across repeated sweeps";
    return {true, d.str()};
}

struct Criterion {
    int id;
    const char* title;
    Real budget_seconds;
    Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "projector optimality and polyhedron oracle equivalence", 10, criterion1},
    {2, "invariant suite on the random affine benchmark", 120, criterion2},
    {3, "iteration-count comparison against both baselines", 300, criterion3},
    {4, "backtracking-base trend on the oligopoly benchmark", 60, criterion4},
    {5, "scalar exponential problem reaches its solution", 1, criterion5},
    {6, "cumulative-integration benchmark residual decrease", 30, criterion6},
    {7, "zero-inertia degeneracy and its invariant sweep", 10, criterion7},
    {8, "byte-identical artifacts across repeated sweeps", 600, criterion8},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    int failures = 0, ran = 0;
    for (const Criterion& c : kCriteria) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
            continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const Real secs =
            std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0)
                .count();
        const bool in_budget = secs < c.budget_seconds;
        const bool pass = out.pass && in_budget;
        if (!pass) ++failures;
        std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << " ("
                  << std::fixed << std::setprecision(2) << secs << " s, budget "
                  << c.budget_seconds << " s): " << c.title << " -- " << out.detail;
        if (out.pass && !in_budget) std::cout << " [runtime budget exceeded]";
        std::cout << std::defaultfloat << "\n";
    }
    std::cout << (ran - failures) << "/" << ran << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
