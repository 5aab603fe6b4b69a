#include "visolve/problems.hpp"

#include "visolve/rng.hpp"

#include <cmath>
#include <limits>

namespace visolve {

namespace {

// Substream tags; one independent stream per generated component.
enum Tag : std::uint64_t {
    tag_dense_factor = 0,
    tag_skew_source = 1,
    tag_diagonal = 2,
    tag_constraint_matrix = 3,
    tag_constraint_rhs = 4,
    tag_initial_point = 5,
};

} // namespace

ProblemInstance gen_harker_pang(const HarkerPangParams& p) {
    if (p.m_dim < 1 || p.k_cons < 1)
        throw std::invalid_argument("gen_harker_pang: dimensions must be positive");
    const Index m = p.m_dim;
    const Index k = p.k_cons;

    SplitMix64 rb = substream(p.seed, tag_dense_factor);
    const Matrix b_factor = uniform_matrix(rb, m, m, -1.0, 1.0);

    SplitMix64 rs = substream(p.seed, tag_skew_source);
    const Matrix g = uniform_matrix(rs, m, m, -1.0, 1.0);
    const Matrix skew = 0.5 * (g - g.transpose());

    SplitMix64 rd = substream(p.seed, tag_diagonal);
    const Vector diag = uniform_vector(rd, m, 0.5, 1.5);

    Matrix mat = b_factor * b_factor.transpose() + skew;
    mat += diag.asDiagonal().toDenseMatrix();

    SplitMix64 rc = substream(p.seed, tag_constraint_matrix);
    const Matrix b_c = uniform_matrix(rc, k, m, -1.0, 1.0);
    SplitMix64 rr = substream(p.seed, tag_constraint_rhs);
    const Vector b = uniform_vector(rr, k, 0.0, 1.0);

    SplitMix64 rx = substream(p.seed, tag_initial_point);
    Vector x1 = uniform_vector(rx, m, -1.0, 1.0);

    ProblemInstance inst{
        make_affine_operator(mat, Vector::Zero(m)),
        FeasibleSet::polyhedron(b_c, b),
        KnownSolutionInfo{Vector::Zero(m), true},
        std::move(x1),
        "harker_pang_m" + std::to_string(m) + "_k" + std::to_string(k),
        p.seed};
    return inst;
}

ProblemInstance gen_nash_cournot(Index n_units, std::uint64_t seed) {
    if (n_units < 1)
        throw std::invalid_argument("gen_nash_cournot: need at least one unit");

    SplitMix64 rb = substream(seed, tag_dense_factor);
    Vector beta(n_units);
    for (Index i = 0; i < n_units; ++i) {
        // Uniform on (0,1]: map a zero draw to the closed end.
        const Real u = rb.uniform01();
        beta[i] = u == 0.0 ? 1.0 : u;
    }

    SplitMix64 rq = substream(seed, tag_diagonal);
    SplitMix64 rl = substream(seed, tag_constraint_rhs);
    NashCournotParams params;
    params.beta = std::move(beta);
    params.alpha_price = 100.0;
    params.cost_quad = uniform_vector(rq, n_units, 1.0, 40.0);
    params.cost_lin = uniform_vector(rl, n_units, 1.0, 40.0);

    SplitMix64 rx = substream(seed, tag_initial_point);
    Vector x1 = uniform_vector(rx, n_units, 1.0, 40.0);

    ProblemInstance inst{
        make_nash_cournot_operator(params),
        FeasibleSet::box(Vector::Constant(n_units, 1.0),
                         Vector::Constant(n_units, 40.0)),
        KnownSolutionInfo{},
        std::move(x1),
        "nash_cournot_n" + std::to_string(n_units),
        seed};
    return inst;
}

ProblemInstance gen_volterra(Index grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("gen_volterra: grid_size must be at least 2");
    FeasibleSet set = FeasibleSet::moment_hyperplane(moment_weights(grid_size), 2.0);
    Vector x1 = project(set, Vector::Zero(grid_size)).point;
    ProblemInstance inst{
        make_volterra_operator(grid_size),
        std::move(set),
        KnownSolutionInfo{},
        std::move(x1),
        "volterra_n" + std::to_string(grid_size),
        0};
    return inst;
}

ProblemInstance gen_exponential() {
    const Real inf = std::numeric_limits<Real>::infinity();
    Vector lo(1), hi(1), x1(1), star(1);
    lo[0] = 0.0;
    hi[0] = inf;
    x1[0] = 2.0;
    star[0] = 0.0;
    ProblemInstance inst{
        make_exponential_operator(),
        FeasibleSet::box(lo, hi),
        KnownSolutionInfo{star, true},
        x1,
        "exponential",
        0};
    return inst;
}

} // namespace visolve
