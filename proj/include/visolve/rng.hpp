#pragma once

#include "visolve/core.hpp"

#include <cstdint>

namespace visolve {

/// SplitMix64 generator (Steele, Lea & Flood). Chosen over std::mt19937_64 +
/// std::uniform_real_distribution because the distribution's output is
/// implementation-defined; this generator and the 53-bit mapping below are
/// bit-reproducible across platforms and languages.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53 random bits.
    Real uniform01() {
        return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53;
    }

    Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

/// Derives an independent substream from (seed, tag). Generators split their
/// randomness into one tagged stream per component (matrix entries, offsets,
/// initial points, ...) so that adding a component never perturbs the others.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 a(seed);
    SplitMix64 b(tag * 0x9E3779B97F4A7C15ULL);
    return SplitMix64(a.next_u64() ^ b.next_u64());
}

/// Entries drawn in index order.
inline Vector uniform_vector(SplitMix64& rng, Index n, Real lo, Real hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

/// Entries drawn row by row, each row left to right.
inline Matrix uniform_matrix(SplitMix64& rng, Index rows, Index cols, Real lo, Real hi) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

} // namespace visolve
