#include "visolve/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace visolve::bench {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const char* to_string(ProblemFamily f) {
    switch (f) {
        case ProblemFamily::exponential: return "exponential";
        case ProblemFamily::nash_cournot: return "nash_cournot";
        case ProblemFamily::harker_pang: return "harker_pang";
        case ProblemFamily::volterra: return "volterra";
    }
    return "unknown";
}

ProblemFamily family_from_string(const std::string& s) {
    if (s == "exponential") return ProblemFamily::exponential;
    if (s == "nash_cournot") return ProblemFamily::nash_cournot;
    if (s == "harker_pang") return ProblemFamily::harker_pang;
    if (s == "volterra") return ProblemFamily::volterra;
    throw std::invalid_argument("unknown problem family: " + s);
}

namespace {

constexpr Real kAlg1AlphaCap = 1.0 / 3.0;

std::string fmt_real(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ConfigError(field, msg);
}

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) fail(path + "." + it.key(), "unknown field");
    }
}

Real get_real(const json& j, const std::string& path, const char* key, Real dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<Real>();
}

std::int64_t get_int(const json& j, const std::string& path, const char* key,
                     std::int64_t dflt) {
    if (!j.contains(key)) return dflt;
    if (!j[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return j[key].get<std::int64_t>();
}

MethodSection parse_method(const json& j, const std::string& path) {
    expect_keys(j, path,
                {"name", "gamma", "sigma_ls", "alpha", "alpha_ramp_length", "lambda",
                 "max_iter", "max_ls_exponent"});
    if (!j.contains("name") || !j["name"].is_string())
        fail(path + ".name", "method name is required");

    MethodSection m;
    try {
        m.method = method_from_string(j["name"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(path + ".name", e.what());
    }
    m.cfg.gamma = get_real(j, path, "gamma", 0.8);
    m.cfg.sigma_ls = get_real(j, path, "sigma_ls", 0.5);
    const Real alpha = get_real(j, path, "alpha", 0.2);
    const auto ramp = get_int(j, path, "alpha_ramp_length", 0);
    m.cfg.alpha = ramp > 0 ? AlphaSchedule::ramp(alpha, ramp)
                           : AlphaSchedule::constant(alpha);
    if (j.contains("lambda")) {
        if (!j["lambda"].is_number()) fail(path + ".lambda", "expected a number");
        m.cfg.lambda = j["lambda"].get<Real>();
    }
    m.cfg.max_iter = get_int(j, path, "max_iter", 100000);
    m.cfg.max_ls_exponent =
        static_cast<int>(get_int(j, path, "max_ls_exponent", 60));

    if (!(m.cfg.gamma > 0.0 && m.cfg.gamma < 1.0))
        fail(path + ".gamma", "must lie in (0,1)");
    if (!(m.cfg.sigma_ls > 0.0 && m.cfg.sigma_ls < 1.0))
        fail(path + ".sigma_ls", "must lie in (0,1)");
    if (alpha < 0.0) fail(path + ".alpha", "must be nonnegative");
    if (m.method == Method::alg1 && !(m.cfg.alpha.limit() < kAlg1AlphaCap))
        fail(path + ".alpha",
             "inertia cap for the line-search method must stay below 1/3 "
             "(nondecreasing schedule, 0 <= alpha_n <= cap < 1/3); got " +
                 fmt_real(m.cfg.alpha.limit()));
    if (m.method == Method::isem &&
        !(m.cfg.alpha.limit() < std::sqrt(5.0) - 2.0))
        fail(path + ".alpha", "inertia cap for isem must stay below sqrt(5)-2");
    if (m.cfg.lambda && !(*m.cfg.lambda > 0.0))
        fail(path + ".lambda", "must be positive");
    if (m.cfg.max_iter < 1) fail(path + ".max_iter", "must be positive");
    if (m.cfg.max_ls_exponent < 1)
        fail(path + ".max_ls_exponent", "must be positive");
    return m;
}

ProblemSection parse_problem(const json& j, const std::string& path) {
    expect_keys(j, path,
                {"family", "seeds", "n_units", "m_dim", "k_cons", "grid_size"});
    if (!j.contains("family") || !j["family"].is_string())
        fail(path + ".family", "problem family is required");
    ProblemSection p;
    try {
        p.family = family_from_string(j["family"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail(path + ".family", e.what());
    }
    p.n_units = get_int(j, path, "n_units", 10);
    p.m_dim = get_int(j, path, "m_dim", 10);
    p.k_cons = get_int(j, path, "k_cons", 30);
    p.grid_size = get_int(j, path, "grid_size", 100);
    if (p.n_units < 1) fail(path + ".n_units", "must be positive");
    if (p.m_dim < 1) fail(path + ".m_dim", "must be positive");
    if (p.k_cons < 1) fail(path + ".k_cons", "must be positive");
    if (p.grid_size < 2) fail(path + ".grid_size", "must be at least 2");
    if (j.contains("seeds")) {
        if (!j["seeds"].is_array() || j["seeds"].empty())
            fail(path + ".seeds", "expected a nonempty array");
        p.seeds.clear();
        for (std::size_t i = 0; i < j["seeds"].size(); ++i) {
            const auto& s = j["seeds"][i];
            if (!s.is_number_integer() || s.get<std::int64_t>() < 0)
                fail(path + ".seeds[" + std::to_string(i) + "]",
                     "expected a nonnegative integer");
            p.seeds.push_back(s.get<std::uint64_t>());
        }
    }
    return p;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("<root>", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("<root>", "expected a JSON object");
    expect_keys(j, "<root>",
                {"problem", "methods", "stop_rule", "tol", "repetitions", "mode",
                 "out_dir"});

    ExperimentConfig cfg;
    if (!j.contains("problem")) fail("problem", "required");
    cfg.problem = parse_problem(j["problem"], "problem");

    if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty())
        fail("methods", "expected a nonempty array");
    for (std::size_t i = 0; i < j["methods"].size(); ++i)
        cfg.methods.push_back(
            parse_method(j["methods"][i], "methods[" + std::to_string(i) + "]"));

    if (j.contains("stop_rule")) {
        if (!j["stop_rule"].is_string()) fail("stop_rule", "expected a string");
        try {
            cfg.stop_rule = stop_rule_from_string(j["stop_rule"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail("stop_rule", e.what());
        }
    }
    cfg.tol = get_real(j, "<root>", "tol", 1e-3);
    if (!(cfg.tol > 0.0)) fail("tol", "must be positive");
    cfg.repetitions = static_cast<int>(get_int(j, "<root>", "repetitions", 1));
    if (cfg.repetitions < 1) fail("repetitions", "must be positive");
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) fail("mode", "expected a string");
        const std::string m = j["mode"].get<std::string>();
        if (m == "checked")
            cfg.mode = CheckMode::checked;
        else if (m == "fast")
            cfg.mode = CheckMode::fast;
        else
            fail("mode", "expected \"checked\" or \"fast\"");
    }
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) fail("out_dir", "expected a string");
        cfg.out_dir = j["out_dir"].get<std::string>();
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json j;
    json p;
    p["family"] = to_string(cfg.problem.family);
    p["seeds"] = cfg.problem.seeds;
    p["n_units"] = cfg.problem.n_units;
    p["m_dim"] = cfg.problem.m_dim;
    p["k_cons"] = cfg.problem.k_cons;
    p["grid_size"] = cfg.problem.grid_size;
    j["problem"] = p;
    j["methods"] = json::array();
    for (const auto& m : cfg.methods) {
        json jm;
        jm["name"] = to_string(m.method);
        jm["gamma"] = m.cfg.gamma;
        jm["sigma_ls"] = m.cfg.sigma_ls;
        jm["alpha"] = m.cfg.alpha.limit();
        if (m.cfg.alpha.kind == AlphaSchedule::Kind::ramp)
            jm["alpha_ramp_length"] = m.cfg.alpha.ramp_length;
        if (m.cfg.lambda) jm["lambda"] = *m.cfg.lambda;
        jm["max_iter"] = m.cfg.max_iter;
        jm["max_ls_exponent"] = m.cfg.max_ls_exponent;
        j["methods"].push_back(jm);
    }
    j["stop_rule"] = to_string(cfg.stop_rule);
    j["tol"] = cfg.tol;
    j["repetitions"] = cfg.repetitions;
    j["mode"] = cfg.mode == CheckMode::checked ? "checked" : "fast";
    j["out_dir"] = cfg.out_dir;
    return j.dump(2);
}

Stats compute_stats(std::vector<Real> values) {
    Stats s;
    s.count = static_cast<std::int64_t>(values.size());
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    s.median = n % 2 == 1 ? values[n / 2]
                          : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    s.mean = std::accumulate(values.begin(), values.end(), Real(0)) /
             static_cast<Real>(n);
    s.min = values.front();
    s.max = values.back();
    return s;
}

std::string trace_csv_string(const RunTrace& trace) {
    std::string out = "n,step_diff,residual,eta,ls_trials,gamma_n,elapsed_s\n";
    for (const auto& r : trace.records) {
        out += std::to_string(r.n);
        out += ',';
        out += fmt_real(r.step_diff);
        out += ',';
        out += fmt_real(r.residual);
        out += ',';
        out += fmt_real(r.eta);
        out += ',';
        out += std::to_string(r.ls_trials);
        out += ',';
        if (r.gamma_n) out += fmt_real(*r.gamma_n);
        out += ',';
        out += fmt_real(r.elapsed);
        out += '\n';
    }
    return out;
}

void emit_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_trace_csv: cannot open " + path);
    f << trace_csv_string(trace);
    if (!f) throw std::runtime_error("emit_trace_csv: write failed for " + path);
}

std::string plot_csv_string(const RunTrace& trace) {
    std::string out = "n,step_diff,x_norm\n";
    for (const auto& r : trace.records) {
        out += std::to_string(r.n);
        out += ',';
        out += fmt_real(r.step_diff);
        out += ',';
        out += fmt_real(r.x_norm);
        out += '\n';
    }
    return out;
}

namespace {

bool run_succeeded(RunStatus s) {
    return s == RunStatus::converged || s == RunStatus::exact_solution_found;
}

Real final_metric(const RunTrace& trace, StopRule rule) {
    if (trace.records.empty()) return 0.0;
    const auto& last = trace.records.back();
    switch (rule) {
        case StopRule::step_diff: return last.step_diff;
        case StopRule::norm_to_zero: return last.x_norm;
        case StopRule::residual: return last.residual;
    }
    return 0.0;
}

const char* metric_name(StopRule rule) {
    switch (rule) {
        case StopRule::step_diff: return "final_step";
        case StopRule::norm_to_zero: return "final_norm";
        case StopRule::residual: return "final_residual";
    }
    return "final";
}

} // namespace

std::vector<SummaryRow> summarize(
    const std::map<std::string, std::vector<const RunTrace*>>& by_method,
    const std::string& problem_label, StopRule rule) {
    std::vector<SummaryRow> rows;
    for (const auto& [method, traces] : by_method) {
        SummaryRow row;
        row.method = method;
        row.problem = problem_label;
        row.seed_count = static_cast<std::int64_t>(traces.size());
        std::vector<Real> iters, cpu, metric;
        for (const RunTrace* t : traces) {
            row.invariant_violations += static_cast<std::int64_t>(t->violations.size());
            if (t->status == RunStatus::exact_solution_found) ++row.exact;
            if (!run_succeeded(t->status)) {
                ++row.failed;
                continue;
            }
            ++row.converged;
            iters.push_back(static_cast<Real>(t->records.size()));
            cpu.push_back(t->total_seconds);
            metric.push_back(final_metric(*t, rule));
        }
        row.iterations = compute_stats(std::move(iters));
        row.cpu_seconds = compute_stats(std::move(cpu));
        row.final_metric = compute_stats(std::move(metric));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_table(const std::vector<SummaryRow>& rows, StopRule rule) {
    std::ostringstream os;
    os << std::left << std::setw(16) << "method" << std::right << std::setw(6)
       << "runs" << std::setw(6) << "conv" << std::setw(6) << "fail"
       << std::setw(10) << "iter med" << std::setw(11) << "iter mean"
       << std::setw(9) << "iter min" << std::setw(9) << "iter max"
       << std::setw(13) << "cpu med (s)" << std::setw(16) << metric_name(rule)
       << std::setw(6) << "viol" << '\n';
    os << std::string(108, '-') << '\n';
    for (const auto& r : rows) {
        os << std::left << std::setw(16) << r.method << std::right << std::setw(6)
           << r.seed_count << std::setw(6) << r.converged << std::setw(6)
           << r.failed;
        if (r.iterations.count > 0) {
            os << std::fixed << std::setprecision(1) << std::setw(10)
               << r.iterations.median << std::setw(11) << r.iterations.mean
               << std::setprecision(0) << std::setw(9) << r.iterations.min
               << std::setw(9) << r.iterations.max << std::scientific
               << std::setprecision(2) << std::setw(13) << r.cpu_seconds.median
               << std::setw(16) << r.final_metric.median << std::defaultfloat
               << std::setprecision(6);
        } else {
            os << std::setw(10) << "-" << std::setw(11) << "-" << std::setw(9) << "-"
               << std::setw(9) << "-" << std::setw(13) << "-" << std::setw(16)
               << "-";
        }
        os << std::setw(6) << r.invariant_violations << '\n';
    }
    return os.str();
}

namespace {

ProblemInstance make_instance(const ProblemSection& p, std::uint64_t seed) {
    switch (p.family) {
        case ProblemFamily::exponential: return gen_exponential();
        case ProblemFamily::nash_cournot: return gen_nash_cournot(p.n_units, seed);
        case ProblemFamily::harker_pang:
            return gen_harker_pang({p.m_dim, p.k_cons, seed});
        case ProblemFamily::volterra: return gen_volterra(p.grid_size);
    }
    throw std::logic_error("make_instance: unhandled family");
}

struct RunArtifacts {
    std::string trace_name, plot_name;
    std::string trace_csv, plot_csv;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

json stats_json(const Stats& s) {
    json j;
    j["count"] = s.count;
    j["median"] = s.median;
    j["mean"] = s.mean;
    j["min"] = s.min;
    j["max"] = s.max;
    return j;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.methods.empty()) throw ConfigError("methods", "expected a nonempty array");
    if (cfg.problem.seeds.empty())
        throw ConfigError("problem.seeds", "expected a nonempty array");

    SolveOptions opts;
    opts.check_mode = cfg.mode;

    // Rows and artifact names carry an index suffix when a method appears
    // more than once (parameter sweeps within one config).
    std::map<std::string, int> name_count;
    for (const auto& ms : cfg.methods) ++name_count[to_string(ms.method)];
    std::vector<std::string> labels;
    std::map<std::string, int> seen;
    for (const auto& ms : cfg.methods) {
        const std::string base = to_string(ms.method);
        if (name_count[base] > 1)
            labels.push_back(base + "_" + std::to_string(seen[base]++));
        else
            labels.push_back(base);
    }

    std::vector<RunArtifacts> artifacts;
    std::vector<std::pair<RunKey, RunTrace>> runs;
    std::string problem_label;

    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        std::vector<RunArtifacts> rep_artifacts;
        std::vector<std::pair<RunKey, RunTrace>> rep_runs;
        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            const auto& ms = cfg.methods[mi];
            for (std::uint64_t seed : cfg.problem.seeds) {
                ProblemInstance inst = make_instance(cfg.problem, seed);
                problem_label = inst.label;
                SolverConfig scfg = ms.cfg;
                scfg.stop_rule = cfg.stop_rule;
                scfg.tol = cfg.tol;
                RunTrace trace;
                try {
                    trace = solve(inst.op, inst.feasible, ms.method, scfg,
                                  inst.x1, inst.known, opts);
                } catch (const std::exception& e) {
                    // One broken run must not abort the sweep.
                    trace.status = RunStatus::line_search_failure;
                    trace.diagnostic = e.what();
                    trace.final_point = inst.x1;
                }
                const std::string stem =
                    labels[mi] + "_seed" + std::to_string(seed);
                RunArtifacts a;
                a.trace_name = "trace_" + stem + ".csv";
                a.plot_name = "plot_" + stem + ".csv";
                a.trace_csv = trace_csv_string(trace);
                a.plot_csv = plot_csv_string(trace);
                rep_artifacts.push_back(std::move(a));
                rep_runs.emplace_back(RunKey{labels[mi], seed}, std::move(trace));
            }
        }
        if (rep == 0) {
            artifacts = std::move(rep_artifacts);
            runs = std::move(rep_runs);
        } else {
            for (std::size_t i = 0; i < artifacts.size(); ++i) {
                if (artifacts[i].trace_csv != rep_artifacts[i].trace_csv ||
                    artifacts[i].plot_csv != rep_artifacts[i].plot_csv)
                    throw std::runtime_error(
                        "run_experiment: repetition " + std::to_string(rep + 1) +
                        " produced different bytes for " + artifacts[i].trace_name);
            }
        }
    }

    fs::create_directories(cfg.out_dir);
    ExperimentResult result;
    for (const auto& a : artifacts) {
        write_file(fs::path(cfg.out_dir) / a.trace_name, a.trace_csv);
        write_file(fs::path(cfg.out_dir) / a.plot_name, a.plot_csv);
        result.artifacts.push_back(a.trace_name);
        result.artifacts.push_back(a.plot_name);
    }

    std::map<std::string, std::vector<const RunTrace*>> by_method;
    for (const auto& [key, trace] : runs) by_method[key.method].push_back(&trace);
    result.rows = summarize(by_method, problem_label, cfg.stop_rule);
    for (const auto& [key, trace] : runs)
        result.statuses.emplace_back(key, trace.status);

    std::int64_t total_violations = 0;
    std::int64_t total_failed = 0;
    for (const auto& row : result.rows) {
        total_violations += row.invariant_violations;
        total_failed += row.failed;
    }
    result.exit_code = total_violations > 0 ? exit_invariant_violation
                       : total_failed > 0  ? exit_not_converged
                                           : exit_ok;

    // summary.json carries only reproducible quantities; wall-clock stats go
    // to timing.json and the text table.
    json summary;
    summary["problem"] = problem_label;
    summary["family"] = to_string(cfg.problem.family);
    summary["stop_rule"] = to_string(cfg.stop_rule);
    summary["tol"] = cfg.tol;
    summary["mode"] = cfg.mode == CheckMode::checked ? "checked" : "fast";
    summary["exit_code"] = result.exit_code;
    summary["rows"] = json::array();
    for (const auto& row : result.rows) {
        json jr;
        jr["method"] = row.method;
        jr["seeds"] = row.seed_count;
        jr["converged"] = row.converged;
        jr["exact_solutions"] = row.exact;
        jr["failed"] = row.failed;
        jr["iterations"] = stats_json(row.iterations);
        jr[metric_name(cfg.stop_rule)] = stats_json(row.final_metric);
        jr["invariant_violations"] = row.invariant_violations;
        summary["rows"].push_back(jr);
    }
    json run_list = json::array();
    for (const auto& [key, status] : result.statuses) {
        json jr;
        jr["method"] = key.method;
        jr["seed"] = key.seed;
        jr["status"] = to_string(status);
        run_list.push_back(jr);
    }
    summary["runs"] = run_list;
    write_file(fs::path(cfg.out_dir) / "summary.json", summary.dump(2) + "\n");
    result.artifacts.push_back("summary.json");

    json timing;
    timing["rows"] = json::array();
    for (const auto& row : result.rows) {
        json jr;
        jr["method"] = row.method;
        jr["cpu_seconds"] = stats_json(row.cpu_seconds);
        timing["rows"].push_back(jr);
    }
    json per_run = json::array();
    for (const auto& [key, trace] : runs) {
        json jr;
        jr["method"] = key.method;
        jr["seed"] = key.seed;
        jr["seconds"] = trace.total_seconds;
        per_run.push_back(jr);
    }
    timing["runs"] = per_run;
    write_file(fs::path(cfg.out_dir) / "timing.json", timing.dump(2) + "\n");
    result.artifacts.push_back("timing.json");

    std::string table = render_table(result.rows, cfg.stop_rule);
    write_file(fs::path(cfg.out_dir) / "summary.txt", table);
    result.artifacts.push_back("summary.txt");

    return result;
}

} // namespace visolve::bench
