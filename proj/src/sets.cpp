#include "visolve/sets.hpp"

#include "visolve/operators.hpp"

#include <algorithm>
#include <cmath>

namespace visolve {

FeasibleSet FeasibleSet::whole_space(Index dim) {
    FeasibleSet s;
    s.kind_ = SetKind::whole_space;
    s.dim_ = dim;
    return s;
}

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
    if (lo.size() != hi.size())
        throw std::invalid_argument("FeasibleSet::box: bound dimensions differ");
    for (Index i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i]))
            throw std::invalid_argument("FeasibleSet::box: lo > hi at entry " +
                                        std::to_string(i));
    FeasibleSet s;
    s.kind_ = SetKind::box;
    s.dim_ = lo.size();
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
}

FeasibleSet FeasibleSet::halfspace(Vector g, Vector y0) {
    if (g.size() != y0.size())
        throw std::invalid_argument("FeasibleSet::halfspace: dimension mismatch");
    if (g.squaredNorm() == 0.0)
        throw std::invalid_argument("FeasibleSet::halfspace: zero normal");
    FeasibleSet s;
    s.kind_ = SetKind::halfspace;
    s.dim_ = g.size();
    s.g_ = std::move(g);
    s.y0_ = std::move(y0);
    return s;
}

FeasibleSet FeasibleSet::moment_hyperplane(Vector weights, Real level) {
    if (weights.squaredNorm() == 0.0)
        throw std::invalid_argument("FeasibleSet::moment_hyperplane: zero weights");
    FeasibleSet s;
    s.kind_ = SetKind::hyperplane_moment;
    s.dim_ = weights.size();
    s.g_ = std::move(weights);
    s.level_ = level;
    return s;
}

FeasibleSet FeasibleSet::polyhedron(Matrix b_c, Vector b) {
    if (b_c.rows() != b.size())
        throw std::invalid_argument("FeasibleSet::polyhedron: rhs dimension mismatch");
    for (Index i = 0; i < b_c.rows(); ++i)
        if (b_c.row(i).squaredNorm() == 0.0)
            throw std::invalid_argument("FeasibleSet::polyhedron: zero row " +
                                        std::to_string(i));
    FeasibleSet s;
    s.kind_ = SetKind::polyhedron;
    s.dim_ = b_c.cols();
    s.b_c_ = std::move(b_c);
    s.b_ = std::move(b);
    return s;
}

Real FeasibleSet::violation(const Vector& x) const {
    if (x.size() != dim_)
        throw std::invalid_argument("FeasibleSet::violation: dimension mismatch");
    switch (kind_) {
        case SetKind::whole_space: return 0.0;
        case SetKind::box: {
            Real v = 0.0;
            for (Index i = 0; i < dim_; ++i) {
                if (x[i] < lo_[i]) v = std::max(v, lo_[i] - x[i]);
                if (x[i] > hi_[i]) v = std::max(v, x[i] - hi_[i]);
            }
            return v;
        }
        case SetKind::halfspace:
            return std::max(Real(0), g_.dot(x - y0_)) / g_.norm();
        case SetKind::hyperplane_moment:
            return std::abs(g_.dot(x) - level_) / g_.norm();
        case SetKind::polyhedron: {
            Real v = 0.0;
            for (Index i = 0; i < b_c_.rows(); ++i) {
                const Real s = b_c_.row(i).dot(x) - b_[i];
                if (s > 0.0) v = std::max(v, s / b_c_.row(i).norm());
            }
            return v;
        }
    }
    return 0.0;
}

bool FeasibleSet::contains(const Vector& x, Real tol) const {
    return violation(x) <= tol;
}

Vector project_halfspace(const Vector& g, const Vector& y0, const Vector& w) {
    if (g.size() != y0.size() || g.size() != w.size())
        throw std::invalid_argument("project_halfspace: dimension mismatch");
    const Real g2 = g.squaredNorm();
    if (g2 == 0.0)
        throw std::invalid_argument("project_halfspace: zero normal");
    const Real s = g.dot(w - y0);
    if (s <= 0.0) return w;
    return w - (s / g2) * g;
}

Vector project_hyperplane(const Vector& weights, Real level, const Vector& x) {
    if (weights.size() != x.size())
        throw std::invalid_argument("project_hyperplane: dimension mismatch");
    const Real w2 = weights.squaredNorm();
    if (w2 == 0.0) throw std::invalid_argument("project_hyperplane: zero weights");
    return x - ((weights.dot(x) - level) / w2) * weights;
}

Vector project_moment_hyperplane(const Vector& x, Index grid_size, Real level) {
    if (x.size() != grid_size)
        throw std::invalid_argument("project_moment_hyperplane: point not on grid");
    return project_hyperplane(moment_weights(grid_size), level, x);
}

ProjectionReport project_polyhedron_dykstra(const Matrix& b_c, const Vector& b,
                                            const Vector& x, Real move_tol,
                                            int max_sweeps) {
    if (b_c.cols() != x.size() || b_c.rows() != b.size())
        throw std::invalid_argument("project_polyhedron_dykstra: dimension mismatch");
    const Index k = b_c.rows();

    Vector row_sq(k);
    for (Index i = 0; i < k; ++i) {
        row_sq[i] = b_c.row(i).squaredNorm();
        if (row_sq[i] == 0.0)
            throw std::invalid_argument("project_polyhedron_dykstra: zero row");
    }

    Matrix corrections = Matrix::Zero(k, x.size());
    Vector cur = x;
    int sweeps = 0;
    bool converged = false;
    for (int s = 0; s < max_sweeps; ++s) {
        ++sweeps;
        // The iterate itself can stall for a full sweep while the correction
        // terms keep evolving, so convergence is measured on the corrections
        // (Birgin & Raydan's robust stopping rule).
        Real change_sq = 0.0;
        for (Index i = 0; i < k; ++i) {
            const Vector v = cur + corrections.row(i).transpose();
            const Real excess = b_c.row(i).dot(v) - b[i];
            Vector y = v;
            if (excess > 0.0) y -= (excess / row_sq[i]) * b_c.row(i).transpose();
            change_sq += (corrections.row(i) - (v - y).transpose()).squaredNorm();
            corrections.row(i) = (v - y).transpose();
            cur = y;
        }
        if (std::sqrt(change_sq) < move_tol) {
            converged = true;
            break;
        }
    }

    ProjectionReport rep;
    rep.point = cur;
    rep.exact = converged;
    rep.sweeps = sweeps;
    Real viol = 0.0;
    for (Index i = 0; i < k; ++i) {
        const Real s = b_c.row(i).dot(cur) - b[i];
        if (s > 0.0) viol = std::max(viol, s / std::sqrt(row_sq[i]));
    }
    rep.residual_infeasibility = viol;
    return rep;
}

ProjectionReport project(const FeasibleSet& s, const Vector& x) {
    if (x.size() != s.dim())
        throw std::invalid_argument("project: dimension mismatch");
    ProjectionReport rep;
    switch (s.kind()) {
        case SetKind::whole_space:
            rep.point = x;
            return rep;
        case SetKind::box:
            rep.point = x.cwiseMax(s.lo()).cwiseMin(s.hi());
            return rep;
        case SetKind::halfspace:
            rep.point = project_halfspace(s.normal(), s.anchor(), x);
            rep.residual_infeasibility = s.violation(rep.point);
            return rep;
        case SetKind::hyperplane_moment:
            rep.point = project_hyperplane(s.moment(), s.level(), x);
            rep.residual_infeasibility = s.violation(rep.point);
            return rep;
        case SetKind::polyhedron:
            return project_polyhedron_dykstra(s.constraint_matrix(),
                                              s.constraint_rhs(), x);
    }
    throw std::logic_error("project: unhandled set kind");
}

} // namespace visolve
