#include "visolve/core.hpp"
#include "visolve/rng.hpp"

#include <doctest.h>

using namespace visolve;

namespace {

Vector make_vec(std::initializer_list<Real> vals) {
    Vector v(static_cast<Index>(vals.size()));
    Index i = 0;
    for (Real x : vals) v[i++] = x;
    return v;
}

} // namespace

TEST_CASE("inner product basics") {
    CHECK(inner_product(make_vec({1, 2}), make_vec({3, 4})) == 11.0);
    const Vector x = make_vec({0.3, -1.7, 2.2});
    CHECK(inner_product(x, Vector::Zero(3)) == 0.0);
    CHECK(inner_product(x, x) == doctest::Approx(x.squaredNorm()).epsilon(1e-15));
    CHECK_THROWS_AS(inner_product(Vector::Zero(2), Vector::Zero(3)),
                    std::invalid_argument);
}

TEST_CASE("inner product is symmetric and bilinear") {
    SplitMix64 rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 12);
        const Vector a = uniform_vector(rng, n, -5, 5);
        const Vector b = uniform_vector(rng, n, -5, 5);
        const Vector c = uniform_vector(rng, n, -5, 5);
        const Real s = rng.uniform(-3, 3);
        const Real t = rng.uniform(-3, 3);
        const Real scale = 1.0 + std::abs(inner_product(a, b)) +
                           std::abs(inner_product(a, c));
        CHECK(std::abs(inner_product(a, b) - inner_product(b, a)) <= 1e-12 * scale);
        CHECK(std::abs(inner_product(combine(a, s, b, t), c) -
                       (s * inner_product(a, c) + t * inner_product(b, c))) <=
              1e-12 * (1.0 + std::abs(s * inner_product(a, c)) +
                       std::abs(t * inner_product(b, c))));
    }
}

TEST_CASE("norm basics and homogeneity") {
    CHECK(norm(make_vec({3, 4})) == doctest::Approx(5).epsilon(1e-15));
    CHECK(norm(Vector::Zero(4)) == 0.0);
    SplitMix64 rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        const Vector x = uniform_vector(rng, 6, -10, 10);
        const Real c = rng.uniform(-4, 4);
        CHECK(norm(Vector(c * x)) ==
              doctest::Approx(std::abs(c) * norm(x)).epsilon(1e-13));
    }
}

TEST_CASE("parallelogram identity") {
    SplitMix64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 20);
        const Vector x = uniform_vector(rng, n, -10, 10);
        const Vector y = uniform_vector(rng, n, -10, 10);
        const Real lhs = (x + y).squaredNorm() + (x - y).squaredNorm();
        const Real rhs = 2 * x.squaredNorm() + 2 * y.squaredNorm();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + rhs));
    }
}

TEST_CASE("combine") {
    const Vector x = make_vec({1.5, -2});
    const Vector y = make_vec({4, 0.5});
    CHECK(combine(x, 1, y, 0) == x);
    CHECK(combine(x, 1, x, -1).isZero(0.0));
    CHECK(combine(make_vec({1, 0}), 2, make_vec({0, 1}), 3) == make_vec({2, 3}));
    CHECK_THROWS_AS(combine(x, 1.0, Vector::Zero(3), 1.0), std::invalid_argument);
}

TEST_CASE("alpha schedules") {
    const AlphaSchedule c = AlphaSchedule::constant(0.2);
    CHECK(c.at(1) == 0.2);
    CHECK(c.at(1000) == 0.2);
    CHECK(c.limit() == 0.2);

    const AlphaSchedule r = AlphaSchedule::ramp(0.3, 10);
    Real prev = 0.0;
    for (std::int64_t n = 1; n <= 30; ++n) {
        CHECK(r.at(n) >= prev);
        CHECK(r.at(n) <= r.limit());
        prev = r.at(n);
    }
    CHECK(r.at(10) == 0.3);
    CHECK(r.at(25) == 0.3);
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    SolverConfig bad = cfg;
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.sigma_ls = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.lambda = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("splitmix substreams are reproducible and disjoint") {
    SplitMix64 a = substream(123, 0);
    SplitMix64 b = substream(123, 0);
    SplitMix64 c = substream(123, 1);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64()); // overwhelmingly likely for a good mix
    }
}
