#pragma once

#include <limits>
#include <string>

#include "fuzzyemb/core.hpp"

namespace fuzzyemb {

struct ValidityReport {
    double fpc = 0.0;
    double xie_beni = 0.0;
    Index clusters = 0;
    Index points = 0;
    double fuzzifier = 0.0;
};

/// Fuzzy partition coefficient: mean over points of sum_i u_ki^2.
/// 1 for a crisp partition, 1/c for the uniform one.
inline double fpc(const MembershipMatrix& u) {
    return u.values().squaredNorm() / static_cast<double>(u.points());
}

/// Xie-Beni index: fuzzy within-cluster scatter over N times the smallest
/// squared distance between two distinct centers. Lower is better.
inline double xie_beni(const Dataset& data, const Matrix& centers, const MembershipMatrix& u,
                       double m) {
    if (centers.cols() != data.dim() || u.points() != data.size() ||
        u.clusters() != centers.rows())
        throw DimensionMismatch("xie_beni: data, centers and memberships disagree");
    if (centers.rows() < 2) throw InvalidArgument("xie_beni needs at least two centers");

    const Matrix d2 = squared_distances(data.points(), centers);
    const double scatter = (u.values().array().pow(m) * d2.array()).sum();

    double separation = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < centers.rows(); ++i)
        for (Index j = i + 1; j < centers.rows(); ++j)
            separation = std::min(separation, (centers.row(i) - centers.row(j)).squaredNorm());
    if (!(separation > 0.0))
        throw DegenerateSeparation("two or more cluster centers coincide; Xie-Beni is undefined");
    return scatter / (static_cast<double>(data.size()) * separation);
}

inline ValidityReport validity_report(const Dataset& data, const Matrix& centers,
                                      const MembershipMatrix& u, double m) {
    return ValidityReport{fpc(u), xie_beni(data, centers, u, m), u.clusters(), u.points(), m};
}

}  // namespace fuzzyemb
