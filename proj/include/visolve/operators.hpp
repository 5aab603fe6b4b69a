#pragma once

#include "visolve/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

namespace visolve {

struct AffinePart {
    Matrix m;
    Vector q;
};

/// A cost map F: R^dim -> R^dim. Evaluation is pure; when F is affine the
/// matrix/offset pair is kept alongside so structure-aware code (step-size
/// rules, oracles) can use it. A Lipschitz estimate is optional by design:
/// the catalog deliberately includes a non-Lipschitz member.
class Operator {
public:
    using EvalFn = std::function<Vector(const Vector&)>;

    Operator(Index dim, EvalFn eval,
             std::optional<AffinePart> affine = std::nullopt,
             std::optional<Real> lipschitz = std::nullopt)
        : dim_(dim), eval_(std::move(eval)), affine_(std::move(affine)),
          lipschitz_(lipschitz) {}

    Index dim() const { return dim_; }

    Vector operator()(const Vector& x) const {
        if (x.size() != dim_)
            throw std::invalid_argument("Operator: argument dimension " +
                                        std::to_string(x.size()) + ", expected " +
                                        std::to_string(dim_));
        return eval_(x);
    }

    const std::optional<AffinePart>& affine_part() const { return affine_; }
    const std::optional<Real>& lipschitz_estimate() const { return lipschitz_; }

private:
    Index dim_;
    EvalFn eval_;
    std::optional<AffinePart> affine_;
    std::optional<Real> lipschitz_;
};

struct SpectralNormResult {
    Real value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Largest singular value by power iteration on M^T M.
SpectralNormResult spectral_norm(const Matrix& m, Real rel_tol = 1e-8,
                                 int max_iter = 10000);

/// F(x) = Mx + q with the spectral norm of M as Lipschitz estimate.
Operator make_affine_operator(const Matrix& m, const Vector& q);

/// F(x) = e^x on the line. Monotone on [0,inf) but not Lipschitz there,
/// so no Lipschitz estimate is attached.
Operator make_exponential_operator();

/// Oligopoly equilibrium cost data: N production units with price slope
/// beta_j, common price intercept, and per-unit quadratic/linear costs.
struct NashCournotParams {
    Vector beta;       // price slopes, entrywise in (0,1]
    Real alpha_price;  // price intercept
    Vector cost_quad;  // quadratic cost coefficients
    Vector cost_lin;   // linear cost coefficients

    Index n_units() const { return beta.size(); }
    void validate() const;
};

/// Assembles the affine map (B + 2*B1 + diag(cost_quad)) x + (cost_lin - a)
/// where B1 = diag(beta), B has zero diagonal with row i equal to beta_i
/// off the diagonal, and a is the constant intercept vector.
Operator make_nash_cournot_operator(const NashCournotParams& p);

/// Grid nodes t_i = i/grid_size, i = 1..grid_size.
Vector volterra_grid(Index grid_size);

/// Lower-triangular cumulative-integration weights on that grid:
/// A(i,i) = h/2 and A(i,j) = h for j < i.
Matrix volterra_matrix(Index grid_size);

/// Weights of the quadrature used for functionals on the grid: uniform
/// weight h per node, so the weighted pairing is exactly h times the
/// Euclidean one and closed-form projections stay metric projections.
Vector moment_weights(Index grid_size);

/// Discretized cumulative integration (Fx)(t_i) ~ integral of x over [0, t_i].
/// The attached Lipschitz estimate is the continuous operator norm 2/pi;
/// the discrete matrix norm is available via spectral_norm(volterra_matrix(n)).
Operator make_volterra_operator(Index grid_size);

struct MonotonicityReport {
    Real min_inner = 0.0;        // min over sampled pairs of <F(x)-F(y), x-y>
    std::int64_t violations = 0; // pairs below the -1e-10 * (1+||x-y||^2) floor
    bool flagged = false;
};

/// Samples n_pairs random pairs in the box [lo, hi] and reports the worst
/// monotonicity gap. Report-only; never throws on a violation.
MonotonicityReport check_monotone(const Operator& f, const Vector& lo,
                                  const Vector& hi, std::int64_t n_pairs,
                                  std::uint64_t seed);

} // namespace visolve
