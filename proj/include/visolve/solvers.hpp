#pragma once

#include "visolve/core.hpp"
#include "visolve/operators.hpp"
#include "visolve/sets.hpp"

#include <optional>
#include <string>

namespace visolve {

enum class Method { alg1, alg1_noinertia, sem, isem };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::alg1: return "alg1";
        case Method::alg1_noinertia: return "alg1_noinertia";
        case Method::sem: return "sem";
        case Method::isem: return "isem";
    }
    return "unknown";
}

inline Method method_from_string(const std::string& s) {
    if (s == "alg1") return Method::alg1;
    if (s == "alg1_noinertia") return Method::alg1_noinertia;
    if (s == "sem") return Method::sem;
    if (s == "isem") return Method::isem;
    throw std::invalid_argument("unknown method: " + s);
}

struct SolverState {
    Vector x_prev, x_curr; // x_{n-1}, x_n
    Vector w, y, z;        // extrapolation, line-search point, projected point
    Real eta = 1.0;        // accepted backtracking factor
    std::int64_t n = 1;    // iteration index
};

struct KnownSolutionInfo {
    std::optional<Vector> x_star;
    bool unique = false;
};

struct ResidualResult {
    Vector r; // x - z; zero exactly at solutions
    Vector z; // projection of x - F(x)
};

/// Natural-map residual r(x) = x - P(x - F(x)).
ResidualResult residual(const Operator& f, const FeasibleSet& c, const Vector& x);

struct LineSearchResult {
    bool ok = false;
    int m = 0;       // accepted exponent
    Real eta = 1.0;  // gamma^m, computed by repeated multiplication
    Vector y;        // w - eta * r
    Vector f_y;      // F(y), reused by the caller as the cut normal
    Real lhs = 0.0;  // <F(y), r> at acceptance
    Real prev_lhs = 0.0; // value at m-1 (meaningful when m >= 1)
};

/// Backtracks m = 0, 1, ... until <F(w - gamma^m r), r> >= (sigma/2) ||r||^2,
/// so the returned exponent is minimal by construction. ok=false when the
/// cap is exhausted.
LineSearchResult line_search(const Operator& f, const Vector& w, const Vector& r,
                             Real gamma, Real sigma_ls, int cap);

enum class StepKind { advanced, exact_solution, failure };

struct StepResult {
    StepKind kind = StepKind::advanced;
    SolverState state;      // advanced state (valid when kind == advanced)
    IterationRecord record; // populated when kind == advanced
    LineSearchResult ls;    // line-search internals of the accepted step
    Vector certified_point; // for kind == exact_solution
    std::string diagnostic; // for kind == failure
};

/// One iteration of the inertial cut method: extrapolate, evaluate the
/// residual, backtrack, then project onto the cut halfspace
/// {x : <F(y_n), x - y_n> <= 0}. A zero residual or a vanishing cut normal
/// ends the run as an exact solution.
StepResult step_alg1(const Operator& f, const FeasibleSet& c,
                     const SolverState& state, const SolverConfig& cfg);

/// One step of the fixed-step extragradient baseline from x.
Vector step_sem(const Operator& f, const FeasibleSet& c, const Vector& x, Real lambda);

/// Inertial variant: extrapolates w = x + alpha_n (x - x_prev), then takes
/// exactly the baseline step from w; with alpha_n = 0 the iterates are
/// bit-identical to step_sem.
SolverState step_isem(const Operator& f, const FeasibleSet& c,
                      const SolverState& state, Real lambda, Real alpha_n);

/// Admissible step-length product bound lambda * L for the inertial
/// extragradient baseline at inertia cap alpha and margin delta.
Real isem_lambda_bound(Real alpha, Real delta = 0.04);

enum class CheckMode { checked, fast };

struct SolveOptions {
    CheckMode check_mode = CheckMode::checked; // fast samples every 10th iteration
    Real invariant_tol_tight = 1e-10;
    Real invariant_tol_loose = 1e-8;
};

/// Runs `method` from x0 (the previous iterate starts equal to x0) until the
/// stop rule fires, the iteration budget is exhausted, or a step fails.
/// When a known solution is supplied, per-iteration merit diagnostics and
/// the solution-side invariant checks are recorded on the trace.
RunTrace solve(const Operator& f, const FeasibleSet& c, Method method,
               const SolverConfig& cfg, const Vector& x0,
               const KnownSolutionInfo& known = {},
               const SolveOptions& opts = {});

} // namespace visolve
