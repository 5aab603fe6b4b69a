#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace visolve {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Euclidean inner product. Both vectors must have the same dimension.
inline Real inner_product(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    return a.dot(b);
}

/// Euclidean norm.
inline Real norm(const Vector& a) { return a.norm(); }

/// Linear combination ca*a + cb*b.
inline Vector combine(const Vector& a, Real ca, const Vector& b, Real cb) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("combine: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    return ca * a + cb * b;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

enum class StopRule { step_diff, norm_to_zero, residual };

inline const char* to_string(StopRule r) {
    switch (r) {
        case StopRule::step_diff: return "step_diff";
        case StopRule::norm_to_zero: return "norm_to_zero";
        case StopRule::residual: return "residual";
    }
    return "unknown";
}

inline StopRule stop_rule_from_string(const std::string& s) {
    if (s == "step_diff") return StopRule::step_diff;
    if (s == "norm_to_zero") return StopRule::norm_to_zero;
    if (s == "residual") return StopRule::residual;
    throw std::invalid_argument("unknown stop rule: " + s);
}

enum class RunStatus { converged, exact_solution_found, max_iter, line_search_failure };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::converged: return "converged";
        case RunStatus::exact_solution_found: return "exact_solution_found";
        case RunStatus::max_iter: return "max_iter";
        case RunStatus::line_search_failure: return "line_search_failure";
    }
    return "unknown";
}

/// Inertial coefficient schedule. Must be nondecreasing with values in
/// [0, cap]; solvers additionally bound the cap (< 1/3 for the line-search
/// method, < sqrt(5)-2 for the inertial extragradient baseline).
struct AlphaSchedule {
    enum class Kind { constant, ramp };

    Kind kind = Kind::constant;
    Real value = 0.2;        // constant value, or the ramp cap
    Index ramp_length = 100; // iterations until the ramp reaches its cap

    Real at(std::int64_t n) const {
        if (kind == Kind::constant) return value;
        if (n >= ramp_length) return value;
        return value * static_cast<Real>(n) / static_cast<Real>(ramp_length);
    }

    /// Upper bound over all n (the cap used in admissibility checks).
    Real limit() const { return value; }

    static AlphaSchedule constant(Real alpha) {
        return AlphaSchedule{Kind::constant, alpha, 0};
    }
    static AlphaSchedule ramp(Real cap, Index length) {
        return AlphaSchedule{Kind::ramp, cap, length};
    }

    friend bool operator==(const AlphaSchedule&, const AlphaSchedule&) = default;
};

struct SolverConfig {
    Real gamma = 0.8;        // backtracking base, in (0,1)
    Real sigma_ls = 0.5;     // line-search sufficient-progress constant, in (0,1)
    AlphaSchedule alpha = AlphaSchedule::constant(0.2);
    std::optional<Real> lambda; // fixed step for the extragradient baselines
    std::int64_t max_iter = 100000;
    Real tol = 1e-3;
    StopRule stop_rule = StopRule::step_diff;
    int max_ls_exponent = 60;
    bool sample_iteration_clock = false; // off by default so traces are deterministic

    void validate() const {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("gamma must lie in (0,1)");
        if (!(sigma_ls > 0.0 && sigma_ls < 1.0))
            throw std::invalid_argument("sigma_ls must lie in (0,1)");
        if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
        if (max_ls_exponent < 1)
            throw std::invalid_argument("max_ls_exponent must be positive");
        if (alpha.limit() < 0.0)
            throw std::invalid_argument("alpha schedule must be nonnegative");
        if (lambda && !(*lambda > 0.0))
            throw std::invalid_argument("lambda must be positive when given");
    }

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct IterationRecord {
    std::int64_t n = 0;     // 1-based iteration index
    Real step_diff = 0.0;   // ||x_{n+1} - x_n||
    Real residual = 0.0;    // ||w_n - z_n||
    Real eta = 1.0;         // accepted backtracking factor gamma^m
    int ls_trials = 0;      // accepted backtracking exponent m
    std::optional<Real> gamma_n; // merit diagnostic, only when a solution is known
    Real elapsed = 0.0;     // seconds since run start (0 unless clock sampling is on)

    // Diagnostics kept in memory only; not part of the CSV schema.
    Real x_norm = 0.0;      // ||x_{n+1}||
    Real dist_to_w = 0.0;   // ||x_{n+1} - w_n||
};

struct InvariantViolation {
    std::int64_t n = 0;
    std::string name;
    Real magnitude = 0.0;
};

struct RunTrace {
    std::vector<IterationRecord> records;
    RunStatus status = RunStatus::max_iter;
    Vector final_point;
    std::string diagnostic;                       // populated on failure
    Real total_seconds = 0.0;                     // wall clock around the solve loop
    std::vector<InvariantViolation> violations;   // empty on a clean run
};

} // namespace visolve
