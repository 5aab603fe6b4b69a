#pragma once

#include "visolve/core.hpp"
#include "visolve/problems.hpp"
#include "visolve/solvers.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace visolve::bench {

enum class ProblemFamily { exponential, nash_cournot, harker_pang, volterra };

const char* to_string(ProblemFamily f);
ProblemFamily family_from_string(const std::string& s);

struct ProblemSection {
    ProblemFamily family = ProblemFamily::exponential;
    Index n_units = 10;    // nash_cournot
    Index m_dim = 10;      // harker_pang
    Index k_cons = 30;     // harker_pang
    Index grid_size = 100; // volterra
    std::vector<std::uint64_t> seeds = {0};

    friend bool operator==(const ProblemSection&, const ProblemSection&) = default;
};

struct MethodSection {
    Method method = Method::alg1;
    SolverConfig cfg; // stop rule/tol filled from the experiment level

    friend bool operator==(const MethodSection&, const MethodSection&) = default;
};

struct ExperimentConfig {
    ProblemSection problem;
    std::vector<MethodSection> methods;
    StopRule stop_rule = StopRule::step_diff;
    Real tol = 1e-3;
    int repetitions = 1;
    CheckMode mode = CheckMode::checked;
    std::string out_dir = "out";

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Thrown on malformed or out-of-range configuration; `field` carries the
/// JSON path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Parses and validates a JSON experiment description, filling defaults
/// (gamma 0.8, sigma 0.5, alpha 0.2). Inadmissible parameters are rejected
/// with their field path, e.g. an inertia cap >= 1/3 for the line-search
/// method.
ExperimentConfig parse_config(const std::string& text);

/// Inverse of parse_config up to default filling: parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

struct Stats {
    Real median = 0.0, mean = 0.0, min = 0.0, max = 0.0;
    std::int64_t count = 0;
};

Stats compute_stats(std::vector<Real> values);

struct SummaryRow {
    std::string method;
    std::string problem;
    std::int64_t seed_count = 0;
    std::int64_t converged = 0;
    std::int64_t exact = 0;
    std::int64_t failed = 0; // max_iter or line-search failure
    Stats iterations;        // over converged runs only
    Stats cpu_seconds;       // over converged runs only
    Stats final_metric;      // stop-rule metric at termination
    std::int64_t invariant_violations = 0;
};

struct RunKey {
    std::string method;
    std::uint64_t seed = 0;
};

struct ExperimentResult {
    std::vector<SummaryRow> rows;
    std::vector<std::pair<RunKey, RunStatus>> statuses;
    int exit_code = 0;
    std::vector<std::string> artifacts; // paths written, relative to out_dir
};

/// Runs every (method, seed) pair, persists one trace CSV and one plot-data
/// CSV per run plus summary.json / summary.txt / timing.json, and returns
/// the summary rows. Per-run failures are tallied, not fatal. All persisted
/// CSV bytes and summary.json are reproducible for fixed seeds; wall-clock
/// measurements live in timing.json and the text table only.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Schema: `n,step_diff,residual,eta,ls_trials,gamma_n,elapsed_s`, one row
/// per record, 17 significant digits, empty field for an absent gamma_n.
void emit_trace_csv(const RunTrace& trace, const std::string& path);
std::string trace_csv_string(const RunTrace& trace);

/// Plot data: `n,step_diff,x_norm` per record.
std::string plot_csv_string(const RunTrace& trace);

/// Aggregates traces grouped by method into summary rows (converged and
/// exact-solution runs feed the stats; failures are only counted).
std::vector<SummaryRow> summarize(
    const std::map<std::string, std::vector<const RunTrace*>>& by_method,
    const std::string& problem_label, StopRule rule);

/// Plain-text table over the rows: iteration stats, CPU time, final metric.
std::string render_table(const std::vector<SummaryRow>& rows, StopRule rule);

// Exit codes of the CLI and of run_experiment.
inline constexpr int exit_ok = 0;
inline constexpr int exit_not_converged = 2;
inline constexpr int exit_invariant_violation = 3;
inline constexpr int exit_config_error = 4;

} // namespace visolve::bench
