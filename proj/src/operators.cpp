#include "visolve/operators.hpp"

#include "visolve/rng.hpp"

#include <cmath>

namespace visolve {

SpectralNormResult spectral_norm(const Matrix& m, Real rel_tol, int max_iter) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("spectral_norm: matrix must be square");
    const Index n = m.rows();
    if (n == 0) return {0.0, true, 0};

    // Deterministic start with a mild tilt so it is never orthogonal to the
    // leading singular subspace of a structured matrix.
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v[i] = 1.0 + static_cast<Real>(i) / static_cast<Real>(10 * n);
    v.normalize();

    Real sigma = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        const Vector u = m * v;
        const Real est = u.norm(); // ||M v|| for unit v
        if (est == 0.0) return {0.0, true, it};
        if (it > 1 && std::abs(est - sigma) <= rel_tol * std::max(Real(1), est))
            return {est, true, it};
        sigma = est;
        Vector g = m.transpose() * u; // one step on M^T M
        const Real gn = g.norm();
        if (gn == 0.0) return {est, true, it};
        v = g / gn;
    }
    return {sigma, false, max_iter};
}

Operator make_affine_operator(const Matrix& m, const Vector& q) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("make_affine_operator: matrix must be square");
    if (m.rows() != q.size())
        throw std::invalid_argument("make_affine_operator: offset dimension " +
                                    std::to_string(q.size()) + ", expected " +
                                    std::to_string(m.rows()));
    const Real lip = spectral_norm(m).value;
    Matrix mc = m;
    Vector qc = q;
    return Operator(
        m.rows(), [mc, qc](const Vector& x) -> Vector { return mc * x + qc; },
        AffinePart{mc, qc}, lip);
}

Operator make_exponential_operator() {
    return Operator(1, [](const Vector& x) -> Vector {
        Vector out(1);
        out[0] = std::exp(x[0]);
        return out;
    });
}

void NashCournotParams::validate() const {
    const Index n = beta.size();
    if (n < 1) throw std::invalid_argument("NashCournotParams: need at least one unit");
    if (cost_quad.size() != n || cost_lin.size() != n)
        throw std::invalid_argument("NashCournotParams: cost vectors must match beta");
    for (Index i = 0; i < n; ++i)
        if (!(beta[i] > 0.0))
            throw std::invalid_argument("NashCournotParams: beta must be positive");
}

Operator make_nash_cournot_operator(const NashCournotParams& p) {
    p.validate();
    const Index n = p.n_units();
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = (i == j) ? 0.0 : p.beta[i];
    m += 2.0 * p.beta.asDiagonal().toDenseMatrix();
    m += p.cost_quad.asDiagonal().toDenseMatrix();
    const Vector q = p.cost_lin - Vector::Constant(n, p.alpha_price);
    return make_affine_operator(m, q);
}

Vector volterra_grid(Index grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("volterra_grid: grid_size must be at least 2");
    const Real h = 1.0 / static_cast<Real>(grid_size);
    Vector t(grid_size);
    for (Index i = 0; i < grid_size; ++i) t[i] = static_cast<Real>(i + 1) * h;
    return t;
}

Matrix volterra_matrix(Index grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("volterra_matrix: grid_size must be at least 2");
    const Real h = 1.0 / static_cast<Real>(grid_size);
    Matrix a = Matrix::Zero(grid_size, grid_size);
    for (Index i = 0; i < grid_size; ++i) {
        for (Index j = 0; j < i; ++j) a(i, j) = h;
        a(i, i) = h / 2.0;
    }
    return a;
}

Vector moment_weights(Index grid_size) {
    const Real h = 1.0 / static_cast<Real>(grid_size);
    return h * volterra_grid(grid_size);
}

Operator make_volterra_operator(Index grid_size) {
    Matrix a = volterra_matrix(grid_size);
    const Real continuous_norm = 2.0 / M_PI;
    return Operator(
        grid_size, [a](const Vector& x) -> Vector { return a * x; },
        AffinePart{a, Vector::Zero(grid_size)}, continuous_norm);
}

MonotonicityReport check_monotone(const Operator& f, const Vector& lo,
                                  const Vector& hi, std::int64_t n_pairs,
                                  std::uint64_t seed) {
    if (lo.size() != f.dim() || hi.size() != f.dim())
        throw std::invalid_argument("check_monotone: bounds dimension mismatch");
    if (n_pairs < 1) throw std::invalid_argument("check_monotone: need n_pairs >= 1");

    SplitMix64 rng = substream(seed, 0x6d6f6e6f);
    MonotonicityReport rep;
    rep.min_inner = std::numeric_limits<Real>::infinity();
    const Index n = f.dim();
    Vector x(n), y(n);
    for (std::int64_t p = 0; p < n_pairs; ++p) {
        for (Index i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
        for (Index i = 0; i < n; ++i) y[i] = rng.uniform(lo[i], hi[i]);
        const Vector d = x - y;
        const Real v = (f(x) - f(y)).dot(d);
        rep.min_inner = std::min(rep.min_inner, v);
        if (v < -1e-10 * (1.0 + d.squaredNorm())) ++rep.violations;
    }
    rep.flagged = rep.violations > 0;
    return rep;
}

} // namespace visolve
