#include "visolve/solvers.hpp"

#include <chrono>
#include <cmath>

namespace visolve {

namespace {

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
    return std::chrono::duration<Real>(Clock::now() - t0).count();
}

constexpr Real kAlg1AlphaCap = 1.0 / 3.0;
const Real kIsemAlphaCap = std::sqrt(5.0) - 2.0;

} // namespace

ResidualResult residual(const Operator& f, const FeasibleSet& c, const Vector& x) {
    if (x.size() != f.dim() || x.size() != c.dim())
        throw std::invalid_argument("residual: dimension mismatch");
    ProjectionReport rep = project(c, x - f(x));
    if (!rep.exact)
        throw std::runtime_error("residual: projection did not converge (" +
                                 std::to_string(rep.sweeps) + " sweeps, violation " +
                                 std::to_string(rep.residual_infeasibility) + ")");
    ResidualResult out;
    out.z = std::move(rep.point);
    out.r = x - out.z;
    return out;
}

LineSearchResult line_search(const Operator& f, const Vector& w, const Vector& r,
                             Real gamma, Real sigma_ls, int cap) {
    if (!(gamma > 0.0 && gamma < 1.0) || !(sigma_ls > 0.0 && sigma_ls < 1.0))
        throw std::invalid_argument("line_search: gamma and sigma_ls must lie in (0,1)");
    const Real rhs = 0.5 * sigma_ls * r.squaredNorm();

    LineSearchResult res;
    Real eta = 1.0; // gamma^m by repeated multiplication
    Real prev_lhs = std::numeric_limits<Real>::quiet_NaN();
    for (int m = 0; m <= cap; ++m) {
        Vector y = w - eta * r;
        Vector fy = f(y);
        const Real lhs = fy.dot(r);
        if (lhs >= rhs) {
            res.ok = true;
            res.m = m;
            res.eta = eta;
            res.y = std::move(y);
            res.f_y = std::move(fy);
            res.lhs = lhs;
            res.prev_lhs = prev_lhs;
            return res;
        }
        prev_lhs = lhs;
        eta *= gamma;
    }
    res.ok = false;
    res.m = cap;
    res.prev_lhs = prev_lhs;
    return res;
}

StepResult step_alg1(const Operator& f, const FeasibleSet& c,
                     const SolverState& state, const SolverConfig& cfg) {
    StepResult out;
    const std::int64_t n = state.n;
    const Real alpha_n = cfg.alpha.at(n);
    Vector w = state.x_curr + alpha_n * (state.x_curr - state.x_prev);
    if (!all_finite(w)) {
        out.kind = StepKind::failure;
        out.diagnostic = "non-finite extrapolation at iteration " + std::to_string(n);
        return out;
    }

    ResidualResult rr = residual(f, c, w);
    const Real res_norm = rr.r.norm();
    if (res_norm <= 1e-14 * (1.0 + w.norm())) {
        out.kind = StepKind::exact_solution;
        out.certified_point = std::move(w);
        return out;
    }

    out.ls = line_search(f, w, rr.r, cfg.gamma, cfg.sigma_ls, cfg.max_ls_exponent);
    if (!out.ls.ok) {
        out.kind = StepKind::failure;
        out.diagnostic = "line search exhausted " +
                         std::to_string(cfg.max_ls_exponent) +
                         " backtracking exponents at iteration " + std::to_string(n) +
                         " (residual " + std::to_string(res_norm) + ")";
        return out;
    }
    if (out.ls.f_y.squaredNorm() == 0.0) {
        // The cut degenerates; a vanishing map value certifies y.
        out.kind = StepKind::exact_solution;
        out.certified_point = out.ls.y;
        return out;
    }

    Vector x_next = project_halfspace(out.ls.f_y, out.ls.y, w);
    if (!all_finite(x_next)) {
        out.kind = StepKind::failure;
        out.diagnostic = "non-finite iterate at iteration " + std::to_string(n);
        return out;
    }

    out.kind = StepKind::advanced;
    out.record.n = n;
    out.record.step_diff = (x_next - state.x_curr).norm();
    out.record.residual = res_norm;
    out.record.eta = out.ls.eta;
    out.record.ls_trials = out.ls.m;
    out.record.x_norm = x_next.norm();
    out.record.dist_to_w = (x_next - w).norm();

    out.state.x_prev = state.x_curr;
    out.state.x_curr = std::move(x_next);
    out.state.w = std::move(w);
    out.state.y = out.ls.y;
    out.state.z = std::move(rr.z);
    out.state.eta = out.ls.eta;
    out.state.n = n + 1;
    return out;
}

namespace {

struct SemParts {
    Vector x_next;
    Vector y;
    Real prediction_move = 0.0; // ||w - y||
};

SemParts sem_core(const Operator& f, const FeasibleSet& c, const Vector& w,
                  Real lambda) {
    const Vector shifted = w - lambda * f(w);
    ProjectionReport rep = project(c, shifted);
    if (!rep.exact)
        throw std::runtime_error("sem step: projection did not converge");
    Vector y = std::move(rep.point);
    const Vector normal = shifted - y;
    const Vector u = w - lambda * f(y);
    SemParts parts;
    parts.prediction_move = (w - y).norm();
    if (normal.squaredNorm() == 0.0) {
        parts.x_next = u; // the cut set is the whole space
    } else {
        parts.x_next = project_halfspace(normal, y, u);
    }
    parts.y = std::move(y);
    return parts;
}

} // namespace

Vector step_sem(const Operator& f, const FeasibleSet& c, const Vector& x,
                Real lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("step_sem: lambda must be positive");
    return sem_core(f, c, x, lambda).x_next;
}

SolverState step_isem(const Operator& f, const FeasibleSet& c,
                      const SolverState& state, Real lambda, Real alpha_n) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("step_isem: lambda must be positive");
    Vector w = state.x_curr + alpha_n * (state.x_curr - state.x_prev);
    SemParts parts = sem_core(f, c, w, lambda);
    SolverState next;
    next.x_prev = state.x_curr;
    next.x_curr = std::move(parts.x_next);
    next.w = std::move(w);
    next.y = parts.y;
    next.z = std::move(parts.y);
    next.eta = 1.0;
    next.n = state.n + 1;
    return next;
}

Real isem_lambda_bound(Real alpha, Real delta) {
    const Real numer = 0.5 - 2.0 * alpha - 0.5 * alpha * alpha - delta;
    const Real denom = 0.5 - alpha + 0.5 * alpha * alpha;
    if (!(numer > 0.0))
        throw std::invalid_argument(
            "isem_lambda_bound: delta too large for this inertia cap");
    return numer / denom;
}

namespace {

void validate_for_method(Method method, const SolverConfig& cfg) {
    cfg.validate();
    switch (method) {
        case Method::alg1:
            if (!(cfg.alpha.limit() < kAlg1AlphaCap))
                throw std::invalid_argument(
                    "alg1: inertia cap must be below 1/3, got " +
                    std::to_string(cfg.alpha.limit()));
            break;
        case Method::alg1_noinertia:
        case Method::sem:
            break;
        case Method::isem:
            if (!(cfg.alpha.limit() < kIsemAlphaCap))
                throw std::invalid_argument(
                    "isem: inertia cap must be below sqrt(5)-2, got " +
                    std::to_string(cfg.alpha.limit()));
            break;
    }
}

Real pick_lambda(const Operator& f, const SolverConfig& cfg, Method method) {
    if (cfg.lambda) return *cfg.lambda;
    if (f.lipschitz_estimate()) return 0.1 / *f.lipschitz_estimate();
    throw std::invalid_argument(std::string(to_string(method)) +
                                ": lambda not given and no Lipschitz estimate "
                                "is available to derive it");
}

/// Per-iteration inequality checks of the cut method's progress guarantees.
/// Each failure is recorded on the trace with its magnitude.
class InvariantChecker {
public:
    InvariantChecker(const SolverConfig& cfg, const KnownSolutionInfo& known,
                     const SolveOptions& opts, RunTrace& trace)
        : cfg_(cfg), opts_(opts), trace_(trace) {
        if (known.x_star) x_star_ = *known.x_star;
    }

    bool active(std::int64_t n) const {
        if (opts_.check_mode == CheckMode::checked) return true;
        return n % 10 == 1;
    }

    /// Minimality of the accepted exponent and exactness of eta = gamma^m.
    void check_line_search(std::int64_t n, const LineSearchResult& ls, Real rhs) {
        if (ls.lhs < rhs) record(n, "line_search_accept", rhs - ls.lhs);
        if (ls.m >= 1 && !(ls.prev_lhs < rhs))
            record(n, "line_search_minimality", ls.prev_lhs - rhs);
        Real eta = 1.0;
        for (int i = 0; i < ls.m; ++i) eta *= cfg_.gamma;
        if (eta != ls.eta) record(n, "eta_product", std::abs(eta - ls.eta));
    }

    /// The cut value at w dominates (sigma eta / 2)||w - z||^2, and the
    /// known solution never lies on the cut's positive side.
    void check_cut_bound(std::int64_t n, const Vector& w, const LineSearchResult& ls,
                         Real res_norm) {
        const Real hw = ls.f_y.dot(w - ls.y);
        const Real bound = 0.5 * cfg_.sigma_ls * ls.eta * res_norm * res_norm;
        const Real slack = opts_.invariant_tol_tight * std::max(Real(1), std::abs(hw));
        if (hw < bound - slack) record(n, "cut_lower_bound", bound - hw);
        if (x_star_) {
            const Real hstar = ls.f_y.dot(*x_star_ - ls.y);
            if (hstar > opts_.invariant_tol_tight)
                record(n, "cut_excludes_solution", hstar);
        }
    }

    /// Distance descent toward the known solution through w, and the merit
    /// decrease with the 1 - 3*cap margin.
    void check_descent(std::int64_t n, const Vector& x_prev, const Vector& x_curr,
                       const Vector& w, const Vector& x_next) {
        if (!x_star_) return;
        const Vector& xs = *x_star_;
        const Real d_next = (x_next - xs).squaredNorm();
        const Real d_w = (w - xs).squaredNorm();
        const Real move = (x_next - w).squaredNorm();
        const Real slack = opts_.invariant_tol_loose * std::max(Real(1), d_w);
        if (d_next > d_w - move + slack)
            record(n, "fejer_descent", d_next - (d_w - move));

        const Real g_n = merit(x_prev, x_curr, cfg_.alpha.at(n));
        const Real g_next = merit(x_curr, x_next, cfg_.alpha.at(n + 1));
        const Real margin =
            (1.0 - 3.0 * cfg_.alpha.limit()) * (x_next - x_curr).squaredNorm();
        const Real slack_g =
            opts_.invariant_tol_loose * std::max(Real(1), std::abs(g_n));
        if (g_next - g_n > -margin + slack_g)
            record(n, "merit_monotonicity", g_next - g_n + margin);
    }

    std::optional<Real> merit_value(std::int64_t n, const Vector& x_prev,
                                    const Vector& x_curr) const {
        if (!x_star_) return std::nullopt;
        return merit(x_prev, x_curr, cfg_.alpha.at(n));
    }

private:
    Real merit(const Vector& x_prev, const Vector& x_curr, Real alpha_n) const {
        const Vector& xs = *x_star_;
        return (x_curr - xs).squaredNorm() - alpha_n * (x_prev - xs).squaredNorm() +
               2.0 * alpha_n * (x_curr - x_prev).squaredNorm();
    }

    void record(std::int64_t n, const char* name, Real magnitude) {
        trace_.violations.push_back({n, name, magnitude});
    }

    const SolverConfig& cfg_;
    const SolveOptions& opts_;
    RunTrace& trace_;
    std::optional<Vector> x_star_;
};

bool stop_fired(StopRule rule, Real tol, const IterationRecord& rec) {
    switch (rule) {
        case StopRule::step_diff: return rec.step_diff <= tol;
        case StopRule::norm_to_zero: return rec.x_norm <= tol;
        case StopRule::residual: return rec.residual <= tol;
    }
    return false;
}

RunTrace solve_alg1(const Operator& f, const FeasibleSet& c, const SolverConfig& cfg,
                    const Vector& x0, const KnownSolutionInfo& known,
                    const SolveOptions& opts) {
    RunTrace trace;
    InvariantChecker checker(cfg, known, opts, trace);
    const auto t0 = Clock::now();

    SolverState state;
    state.x_prev = x0;
    state.x_curr = x0;
    state.n = 1;

    while (true) {
        if (state.n > cfg.max_iter) {
            trace.status = RunStatus::max_iter;
            trace.final_point = state.x_curr;
            break;
        }
        StepResult step;
        try {
            step = step_alg1(f, c, state, cfg);
        } catch (const std::runtime_error& e) {
            // Projection breakdown inside the step; surface it on the trace.
            trace.status = RunStatus::line_search_failure;
            trace.diagnostic = e.what();
            trace.final_point = state.x_curr;
            break;
        }
        if (step.kind == StepKind::exact_solution) {
            trace.status = RunStatus::exact_solution_found;
            trace.final_point = std::move(step.certified_point);
            break;
        }
        if (step.kind == StepKind::failure) {
            trace.status = RunStatus::line_search_failure;
            trace.diagnostic = std::move(step.diagnostic);
            trace.final_point = state.x_curr;
            break;
        }

        step.record.gamma_n = checker.merit_value(state.n, state.x_prev, state.x_curr);
        if (cfg.sample_iteration_clock) step.record.elapsed = seconds_since(t0);
        if (checker.active(state.n)) {
            const Vector r = step.state.w - step.state.z;
            checker.check_line_search(state.n, step.ls,
                                      0.5 * cfg.sigma_ls * r.squaredNorm());
            checker.check_cut_bound(state.n, step.state.w, step.ls,
                                    step.record.residual);
            checker.check_descent(state.n, state.x_prev, state.x_curr,
                                  step.state.w, step.state.x_curr);
        }
        trace.records.push_back(step.record);
        state = std::move(step.state);

        if (stop_fired(cfg.stop_rule, cfg.tol, trace.records.back())) {
            trace.status = RunStatus::converged;
            trace.final_point = state.x_curr;
            break;
        }
    }
    trace.total_seconds = seconds_since(t0);
    return trace;
}

RunTrace solve_extragradient(const Operator& f, const FeasibleSet& c, Method method,
                             const SolverConfig& cfg, const Vector& x0) {
    RunTrace trace;
    const auto t0 = Clock::now();
    const Real lambda = pick_lambda(f, cfg, method);
    if (method == Method::isem && f.lipschitz_estimate()) {
        const Real bound = isem_lambda_bound(cfg.alpha.limit());
        if (lambda * *f.lipschitz_estimate() > bound)
            throw std::invalid_argument(
                "isem: lambda * L = " +
                std::to_string(lambda * *f.lipschitz_estimate()) +
                " exceeds the admissible bound " + std::to_string(bound));
    }

    SolverState state;
    state.x_prev = x0;
    state.x_curr = x0;
    state.n = 1;

    while (true) {
        if (state.n > cfg.max_iter) {
            trace.status = RunStatus::max_iter;
            trace.final_point = state.x_curr;
            break;
        }
        const std::int64_t n = state.n;
        const Real alpha_n = method == Method::isem ? cfg.alpha.at(n) : 0.0;
        SolverState next;
        try {
            next = step_isem(f, c, state, lambda, alpha_n);
        } catch (const std::runtime_error& e) {
            trace.status = RunStatus::line_search_failure;
            trace.diagnostic = e.what();
            trace.final_point = state.x_curr;
            break;
        }
        if (!all_finite(next.x_curr)) {
            trace.status = RunStatus::line_search_failure;
            trace.diagnostic = "non-finite iterate at iteration " + std::to_string(n);
            trace.final_point = state.x_curr;
            break;
        }

        IterationRecord rec;
        rec.n = n;
        rec.step_diff = (next.x_curr - state.x_curr).norm();
        rec.residual = (next.w - next.y).norm();
        rec.eta = 1.0;
        rec.ls_trials = 0;
        rec.x_norm = next.x_curr.norm();
        rec.dist_to_w = (next.x_curr - next.w).norm();
        if (cfg.sample_iteration_clock) rec.elapsed = seconds_since(t0);
        trace.records.push_back(rec);
        state = std::move(next);

        if (rec.residual == 0.0 && rec.step_diff == 0.0) {
            trace.status = RunStatus::exact_solution_found;
            trace.final_point = state.x_curr;
            break;
        }
        if (stop_fired(cfg.stop_rule, cfg.tol, rec)) {
            trace.status = RunStatus::converged;
            trace.final_point = state.x_curr;
            break;
        }
    }
    trace.total_seconds = seconds_since(t0);
    return trace;
}

} // namespace

RunTrace solve(const Operator& f, const FeasibleSet& c, Method method,
               const SolverConfig& cfg, const Vector& x0,
               const KnownSolutionInfo& known, const SolveOptions& opts) {
    if (x0.size() != f.dim() || x0.size() != c.dim())
        throw std::invalid_argument("solve: dimension mismatch between x0, F and C");
    if (!all_finite(x0)) throw std::invalid_argument("solve: x0 must be finite");
    validate_for_method(method, cfg);
    if (known.x_star && !c.contains(*known.x_star, 1e-8))
        throw std::invalid_argument("solve: known solution is not feasible");

    switch (method) {
        case Method::alg1:
            return solve_alg1(f, c, cfg, x0, known, opts);
        case Method::alg1_noinertia: {
            SolverConfig zero = cfg;
            zero.alpha = AlphaSchedule::constant(0.0);
            return solve_alg1(f, c, zero, x0, known, opts);
        }
        case Method::sem:
        case Method::isem:
            return solve_extragradient(f, c, method, cfg, x0);
    }
    throw std::logic_error("solve: unhandled method");
}

} // namespace visolve
