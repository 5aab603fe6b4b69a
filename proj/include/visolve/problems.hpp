#pragma once

#include "visolve/core.hpp"
#include "visolve/operators.hpp"
#include "visolve/sets.hpp"
#include "visolve/solvers.hpp"

#include <cstdint>
#include <string>

namespace visolve {

/// A fully assembled benchmark instance. Instances are pure functions of
/// (params, seed); regenerating with the same seed is bit-identical, so they
/// are never serialized beyond their parameters.
struct ProblemInstance {
    Operator op;
    FeasibleSet feasible;
    KnownSolutionInfo known;
    Vector x1; // initial iterate (the previous iterate starts equal to it)
    std::string label;
    std::uint64_t seed = 0;
};

struct HarkerPangParams {
    Index m_dim = 10;  // ambient dimension
    Index k_cons = 30; // number of inequality constraints
    std::uint64_t seed = 1;
};

/// Random affine monotone instance M = B B^T + S + D with skew S and positive
/// diagonal D, zero offset, and polyhedral constraints B_c x <= b with b >= 0.
/// The origin is feasible and is the unique solution.
///
/// Substreams: 0 dense factor B, 1 skew source, 2 diagonal, 3 constraint
/// matrix, 4 constraint rhs, 5 initial point.
ProblemInstance gen_harker_pang(const HarkerPangParams& p);

/// Oligopoly instance on the box [1,40]^n: slopes in (0,1], cost
/// coefficients in [1,40], price intercept 100 (kept fixed; it places the
/// unconstrained equilibrium inside the box for typical draws). No known
/// solution is attached.
///
/// Substreams: 0 slopes, 1 quadratic costs, 2 linear costs, 3 initial point.
ProblemInstance gen_nash_cournot(Index n_units, std::uint64_t seed);

/// Cumulative-integration operator on the uniform grid with the moment
/// equality constraint at level 2. Deterministic; the initial iterate is the
/// feasible point nearest the origin.
ProblemInstance gen_volterra(Index grid_size = 100);

/// The scalar exponential problem on [0, inf); the known solution is 0.
ProblemInstance gen_exponential();

} // namespace visolve
