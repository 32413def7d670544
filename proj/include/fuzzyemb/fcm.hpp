#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fuzzyemb/core.hpp"
#include "fuzzyemb/random.hpp"

namespace fuzzyemb {

struct FcmConfig {
    Index clusters = 10;
    double fuzzifier = 1.1;
    double tolerance = 1e-6;
    int max_iterations = 300;
    std::uint64_t seed = 0;

    void validate() const {
        if (clusters < 2) throw InvalidArgument("cluster count must be at least 2");
        if (!(fuzzifier > 1.0) || !std::isfinite(fuzzifier))
            throw InvalidArgument("fuzzifier must be a finite value greater than 1");
        if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
        if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
    }
};

/// Snapshot handed to an observer after every iteration of a fit.
struct IterationState {
    int iteration = 0;
    const Matrix& centers;
    const MembershipMatrix& memberships;
    double objective = 0.0;
    /// Gustafson-Kessel only: the norm matrices used for this iteration's
    /// memberships and, per cluster, whether the identity fallback was used.
    const std::vector<Matrix>* norm_matrices = nullptr;
    const std::vector<bool>* fallback = nullptr;
    /// Clusters whose center was re-seeded this iteration.
    const std::vector<Index>* reseeded = nullptr;
};

using IterationObserver = std::function<void(const IterationState&)>;

/// Column mass below which a cluster counts as empty.
inline constexpr double kEmptyClusterMass = 1e-12;

/// sum_k sum_i u_ki^m * ||x_k - c_i||^2
inline double fcm_objective(const Dataset& data, const Matrix& centers, const MembershipMatrix& u,
                            double m) {
    if (u.points() != data.size() || u.clusters() != centers.rows())
        throw DimensionMismatch("membership matrix is " + std::to_string(u.points()) + "x" +
                                std::to_string(u.clusters()) + " but data/centers imply " +
                                std::to_string(data.size()) + "x" + std::to_string(centers.rows()));
    const Matrix d2 = squared_distances(data.points(), centers);
    return (u.values().array().pow(m) * d2.array()).sum();
}

struct CenterUpdate {
    Matrix centers;
    /// Clusters that had no membership mass and were moved onto a data point.
    std::vector<Index> reseeded;
};

/// Weighted means c_i = sum_k u_ki^m x_k / sum_k u_ki^m. An empty cluster is
/// placed on the point farthest from its nearest live center.
inline CenterUpdate update_centers(const Dataset& data, const MembershipMatrix& u, double m) {
    if (u.points() != data.size())
        throw DimensionMismatch("membership matrix has " + std::to_string(u.points()) +
                                " rows for " + std::to_string(data.size()) + " points");
    const Matrix& x = data.points();
    const Matrix w = u.values().array().pow(m).matrix();
    const Eigen::RowVectorXd mass = w.colwise().sum();

    CenterUpdate out;
    out.centers = Matrix::Zero(u.clusters(), data.dim());
    std::vector<bool> live(static_cast<std::size_t>(u.clusters()), false);
    for (Index i = 0; i < u.clusters(); ++i) {
        if (mass(i) < kEmptyClusterMass) {
            out.reseeded.push_back(i);
            continue;
        }
        out.centers.row(i) = (w.col(i).transpose() * x) / mass(i);
        live[static_cast<std::size_t>(i)] = true;
    }

    for (Index i : out.reseeded) {
        Index far = 0;
        double far_d2 = -1.0;
        for (Index k = 0; k < x.rows(); ++k) {
            double nearest = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < u.clusters(); ++j)
                if (live[static_cast<std::size_t>(j)])
                    nearest = std::min(nearest, (x.row(k) - out.centers.row(j)).squaredNorm());
            if (nearest > far_d2) {
                far_d2 = nearest;
                far = k;
            }
        }
        out.centers.row(i) = x.row(far);
        live[static_cast<std::size_t>(i)] = true;
    }
    return out;
}

/// Membership update from squared distances (N x c). A point at zero distance
/// from one or more centers is split evenly among them. Otherwise
///   u_ki = d_ki^(-1/(m-1)) / sum_j d_kj^(-1/(m-1)),
/// evaluated as a softmax over log-distances so small fuzzifiers neither
/// overflow nor underflow.
inline MembershipMatrix memberships_from_distances(const Matrix& d2, double m) {
    const double p = 1.0 / (m - 1.0);
    Matrix u(d2.rows(), d2.cols());
    Eigen::RowVectorXd logits(d2.cols());
    for (Index k = 0; k < d2.rows(); ++k) {
        Index zeros = 0;
        for (Index i = 0; i < d2.cols(); ++i)
            if (d2(k, i) <= 0.0) ++zeros;
        if (zeros > 0) {
            for (Index i = 0; i < d2.cols(); ++i)
                u(k, i) = d2(k, i) <= 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
            continue;
        }
        for (Index i = 0; i < d2.cols(); ++i) logits(i) = -p * std::log(d2(k, i));
        const double top = logits.maxCoeff();
        double sum = 0.0;
        for (Index i = 0; i < d2.cols(); ++i) {
            u(k, i) = std::exp(logits(i) - top);
            sum += u(k, i);
        }
        u.row(k) /= sum;
    }
    return MembershipMatrix(std::move(u));
}

inline MembershipMatrix update_memberships(const Dataset& data, const Matrix& centers, double m) {
    if (!centers.allFinite()) throw InvalidArgument("centers contain non-finite entries");
    return memberships_from_distances(squared_distances(data.points(), centers), m);
}

namespace detail {

inline bool objective_settled(double previous, double current, double tol) {
    return std::abs(current - previous) < tol * std::max(1.0, std::abs(current));
}

inline void check_fit_shape(const Dataset& data, Index clusters, const MembershipMatrix& init) {
    if (data.size() < clusters)
        throw InvalidArgument("need at least as many points (" + std::to_string(data.size()) +
                              ") as clusters (" + std::to_string(clusters) + ")");
    if (init.points() != data.size() || init.clusters() != clusters)
        throw DimensionMismatch("initial membership matrix has the wrong shape");
}

}  // namespace detail

/// Fuzzy C-means from a caller-supplied initial membership matrix.
inline ClusterModel fcm_fit(const Dataset& data, const FcmConfig& config,
                            MembershipMatrix initial, const IterationObserver& observer = {}) {
    config.validate();
    detail::check_fit_shape(data, config.clusters, initial);

    ClusterModel model;
    model.seed = config.seed;
    model.fuzzifier = config.fuzzifier;
    model.memberships = std::move(initial);

    for (int t = 1; t <= config.max_iterations; ++t) {
        CenterUpdate step = update_centers(data, model.memberships, config.fuzzifier);
        model.centers = std::move(step.centers);
        if (!step.reseeded.empty()) {
            model.reseed_events += static_cast<int>(step.reseeded.size());
            model.reseed_iterations.push_back(t);
        }
        model.memberships = update_memberships(data, model.centers, config.fuzzifier);
        const double j = fcm_objective(data, model.centers, model.memberships, config.fuzzifier);
        if (!std::isfinite(j))
            throw SolverAbort("fuzzy c-means objective became non-finite at iteration " +
                              std::to_string(t) + " (seed " + std::to_string(config.seed) + ")");
        model.objective_trace.push_back(j);
        model.iterations = t;
        if (observer)
            observer(IterationState{t, model.centers, model.memberships, j, nullptr, nullptr,
                                    &step.reseeded});
        if (t >= 2 && detail::objective_settled(model.objective_trace[model.objective_trace.size() - 2],
                                                j, config.tolerance)) {
            model.converged = true;
            break;
        }
    }
    return model;
}

/// Fuzzy C-means from a seeded random membership matrix.
inline ClusterModel fcm_fit(const Dataset& data, const FcmConfig& config,
                            const IterationObserver& observer = {}) {
    config.validate();
    if (data.size() < config.clusters)
        throw InvalidArgument("need at least as many points (" + std::to_string(data.size()) +
                              ") as clusters (" + std::to_string(config.clusters) + ")");
    return fcm_fit(data, config, random_memberships(data.size(), config.clusters, config.seed),
                   observer);
}

}  // namespace fuzzyemb
