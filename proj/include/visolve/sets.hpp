#pragma once

#include "visolve/core.hpp"

namespace visolve {

enum class SetKind { whole_space, box, halfspace, hyperplane_moment, polyhedron };

inline const char* to_string(SetKind k) {
    switch (k) {
        case SetKind::whole_space: return "whole_space";
        case SetKind::box: return "box";
        case SetKind::halfspace: return "halfspace";
        case SetKind::hyperplane_moment: return "hyperplane_moment";
        case SetKind::polyhedron: return "polyhedron";
    }
    return "unknown";
}

struct ProjectionReport {
    Vector point;
    bool exact = true;
    int sweeps = 0;                    // iterative projectors only
    Real residual_infeasibility = 0.0; // geometric violation of the output
};

/// A closed convex feasible set with a metric projector. Box, halfspace and
/// moment-hyperplane projections are closed forms; the polyhedron projector
/// is cyclic with correction terms and therefore reports sweep counts.
class FeasibleSet {
public:
    static FeasibleSet whole_space(Index dim);
    /// Entrywise bounds; +-inf entries mean unbounded on that side.
    static FeasibleSet box(Vector lo, Vector hi);
    /// {x : <g, x - y0> <= 0}.
    static FeasibleSet halfspace(Vector g, Vector y0);
    /// {x : <weights, x> = level} with the tagged moment weights.
    static FeasibleSet moment_hyperplane(Vector weights, Real level);
    /// {x : B_c x <= b}.
    static FeasibleSet polyhedron(Matrix b_c, Vector b);

    SetKind kind() const { return kind_; }
    Index dim() const { return dim_; }

    const Vector& lo() const { return lo_; }
    const Vector& hi() const { return hi_; }
    const Vector& normal() const { return g_; }
    const Vector& anchor() const { return y0_; }
    const Vector& moment() const { return g_; }
    Real level() const { return level_; }
    const Matrix& constraint_matrix() const { return b_c_; }
    const Vector& constraint_rhs() const { return b_; }

    /// Geometric infeasibility of x (0 when x is in the set).
    Real violation(const Vector& x) const;
    bool contains(const Vector& x, Real tol = 1e-10) const;

private:
    FeasibleSet() = default;

    SetKind kind_ = SetKind::whole_space;
    Index dim_ = 0;
    Vector lo_, hi_;   // box
    Vector g_, y0_;    // halfspace normal/anchor; g_ doubles as moment weights
    Real level_ = 0.0; // moment level
    Matrix b_c_;       // polyhedron rows
    Vector b_;
};

/// Nearest point of s to x. Closed form for every kind except polyhedron,
/// which runs the cyclic projector below.
ProjectionReport project(const FeasibleSet& s, const Vector& x);

/// Metric projection of w onto {x : <g, x - y0> <= 0}:
/// w - max(0, <g, w - y0>)/||g||^2 * g. A zero normal is rejected; callers
/// treat that case as a solution certificate.
Vector project_halfspace(const Vector& g, const Vector& y0, const Vector& w);

/// Closed-form projection onto {x : <weights, x> = level}.
Vector project_hyperplane(const Vector& weights, Real level, const Vector& x);

/// Projection onto the discretized moment constraint on the uniform grid
/// with grid_size nodes: subtracts the excess of the weighted moment over
/// the level along the grid direction.
Vector project_moment_hyperplane(const Vector& x, Index grid_size, Real level = 2.0);

/// Dykstra's cyclic projection over the rows of {B_c x <= b}. Stops when the
/// correction vectors change less than move_tol over a full sweep (the
/// iterate itself can stall while corrections still evolve), or reports
/// exact=false after max_sweeps. The default cap is sized for adversarial
/// active sets: nearly parallel rows can hold an infeasibility plateau for
/// hundreds of thousands of sweeps before the multipliers settle.
ProjectionReport project_polyhedron_dykstra(const Matrix& b_c, const Vector& b,
                                            const Vector& x, Real move_tol = 1e-10,
                                            int max_sweeps = 1000000);

} // namespace visolve
