#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fuzzyemb/core.hpp"

namespace fuzzyemb {

/// Uniform double in (0, 1) from the top 53 bits of a 64-bit draw. Written out
/// instead of using std::uniform_real_distribution so that a seed produces the
/// same stream with every standard library.
inline double open_unit(std::mt19937_64& rng) {
    for (;;) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

/// N x c matrix whose rows are independent uniform draws from the probability
/// simplex (normalized unit exponentials).
inline MembershipMatrix random_memberships(Index points, Index clusters, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix u(points, clusters);
    for (Index k = 0; k < points; ++k) {
        double sum = 0.0;
        for (Index i = 0; i < clusters; ++i) {
            u(k, i) = -std::log(open_unit(rng));
            sum += u(k, i);
        }
        u.row(k) /= sum;
    }
    return MembershipMatrix(std::move(u));
}

}  // namespace fuzzyemb
