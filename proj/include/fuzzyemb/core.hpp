#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fuzzyemb/errors.hpp"

namespace fuzzyemb {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute tolerance on membership row sums.
inline constexpr double kRowSumTolerance = 1e-9;

/// Labeled points: one row of `points()` per label.
class Dataset {
public:
    Dataset(std::vector<std::string> labels, Matrix points)
        : labels_(std::move(labels)), points_(std::move(points)) {
        if (labels_.empty() || points_.rows() == 0)
            throw InvalidArgument("dataset must contain at least one point");
        if (points_.cols() == 0)
            throw InvalidArgument("dataset dimension must be at least 1");
        if (static_cast<Index>(labels_.size()) != points_.rows())
            throw DimensionMismatch("dataset has " + std::to_string(labels_.size()) +
                                    " labels but " + std::to_string(points_.rows()) + " vectors");
        if (!points_.allFinite())
            throw InvalidArgument("dataset contains non-finite coordinates");
        std::unordered_set<std::string> seen;
        for (const auto& label : labels_)
            if (!seen.insert(label).second)
                throw InvalidArgument("duplicate dataset label '" + label + "'");
    }

    /// Unlabeled convenience constructor; labels become "0", "1", ...
    explicit Dataset(const Matrix& points) : Dataset(numbered_labels(points.rows()), points) {}

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Matrix& points() const noexcept { return points_; }
    Index size() const noexcept { return points_.rows(); }
    Index dim() const noexcept { return points_.cols(); }

private:
    static std::vector<std::string> numbered_labels(Index n) {
        std::vector<std::string> out;
        out.reserve(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) out.push_back(std::to_string(i));
        return out;
    }

    std::vector<std::string> labels_;
    Matrix points_;
};

/// N x c matrix of membership degrees. Row k holds the degrees of point k.
/// Construction does not validate; use validate_membership().
class MembershipMatrix {
public:
    MembershipMatrix() = default;
    explicit MembershipMatrix(Matrix values) : values_(std::move(values)) {}

    const Matrix& values() const noexcept { return values_; }
    Matrix& values() noexcept { return values_; }
    Index points() const noexcept { return values_.rows(); }
    Index clusters() const noexcept { return values_.cols(); }
    double operator()(Index k, Index i) const { return values_(k, i); }

private:
    Matrix values_;
};

struct MembershipViolation {
    Index row = 0;
    /// Offending column, or -1 when the row sum is the problem.
    Index column = -1;
    double value = 0.0;
    std::string message;
};

/// Returns the first violation found, or nullopt if every entry lies in [0,1]
/// and every row sums to 1 within kRowSumTolerance.
inline std::optional<MembershipViolation> validate_membership(const MembershipMatrix& u) {
    const Matrix& v = u.values();
    for (Index k = 0; k < v.rows(); ++k) {
        double sum = 0.0;
        for (Index i = 0; i < v.cols(); ++i) {
            const double x = v(k, i);
            if (!std::isfinite(x) || x < 0.0 || x > 1.0)
                return MembershipViolation{k, i, x,
                                           "entry (" + std::to_string(k) + "," + std::to_string(i) +
                                               ") outside [0,1]"};
            sum += x;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            return MembershipViolation{k, -1, sum,
                                       "row " + std::to_string(k) + " sums to " + std::to_string(sum)};
    }
    return std::nullopt;
}

/// Crisp assignment of each point to one cluster.
struct HardAssignment {
    std::vector<Index> cluster_of;
    Index clusters = 0;
};

/// Per-row argmax; ties go to the lowest cluster index.
inline HardAssignment harden(const MembershipMatrix& u) {
    HardAssignment out;
    out.clusters = u.clusters();
    out.cluster_of.resize(static_cast<std::size_t>(u.points()));
    for (Index k = 0; k < u.points(); ++k) {
        Index best = 0;
        for (Index i = 1; i < u.clusters(); ++i)
            if (u(k, i) > u(k, best)) best = i;
        out.cluster_of[static_cast<std::size_t>(k)] = best;
    }
    return out;
}

/// Indicator matrix of a hard assignment.
inline MembershipMatrix crisp_matrix(const HardAssignment& a) {
    Matrix v = Matrix::Zero(static_cast<Index>(a.cluster_of.size()), a.clusters);
    for (std::size_t k = 0; k < a.cluster_of.size(); ++k) {
        if (a.cluster_of[k] < 0 || a.cluster_of[k] >= a.clusters)
            throw InvalidArgument("cluster index out of range");
        v(static_cast<Index>(k), a.cluster_of[k]) = 1.0;
    }
    return MembershipMatrix(std::move(v));
}

/// Result of one clustering run.
struct ClusterModel {
    Matrix centers;  // c x d
    MembershipMatrix memberships;
    /// Per-cluster norm matrices; present for Gustafson-Kessel fits only.
    std::optional<std::vector<Matrix>> norm_matrices;
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double fuzzifier = 2.0;
    /// Identity-norm substitutions summed over clusters and iterations.
    int fallback_events = 0;
    /// Iterations (1-based) in which at least one fallback happened.
    std::vector<int> fallback_iterations;
    /// Empty clusters whose center was moved to a data point.
    int reseed_events = 0;
    std::vector<int> reseed_iterations;

    Index clusters() const noexcept { return centers.rows(); }
};

/// Squared Euclidean distance from every point to every center (N x c).
inline Matrix squared_distances(const Matrix& points, const Matrix& centers) {
    if (points.cols() != centers.cols())
        throw DimensionMismatch("points have dimension " + std::to_string(points.cols()) +
                                " but centers have " + std::to_string(centers.cols()));
    Matrix out(points.rows(), centers.rows());
    for (Index i = 0; i < centers.rows(); ++i)
        out.col(i) = (points.rowwise() - centers.row(i)).rowwise().squaredNorm();
    return out;
}

}  // namespace fuzzyemb
