#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "fuzzyemb/core.hpp"
#include "fuzzyemb/fcm.hpp"
#include "fuzzyemb/random.hpp"

namespace fuzzyemb {

struct FgkConfig : FcmConfig {
    /// Cluster volumes rho_i; empty means 1 for every cluster.
    std::vector<double> rho;
    /// Weight of the scaled-identity blend in regularize_covariance().
    double cov_reg = 1e-4;

    double volume(Index cluster) const {
        return rho.empty() ? 1.0 : rho[static_cast<std::size_t>(cluster)];
    }

    void validate() const {
        FcmConfig::validate();
        if (!rho.empty() && static_cast<Index>(rho.size()) != clusters)
            throw InvalidArgument("expected " + std::to_string(clusters) + " volumes, got " +
                                  std::to_string(rho.size()));
        for (double r : rho)
            if (!(r > 0.0) || !std::isfinite(r))
                throw InvalidArgument("cluster volumes must be positive and finite");
        if (!(cov_reg >= 0.0 && cov_reg < 1.0))
            throw InvalidArgument("covariance regularization weight must lie in [0,1)");
    }
};

/// Floor used when a covariance matrix has zero trace.
inline constexpr double kCovarianceFloor = 1e-9;
/// Covariances with a larger eigenvalue ratio are treated as singular.
inline constexpr double kMaxCondition = 1e8;
/// Abort after this many consecutive iterations with every cluster on fallback.
inline constexpr int kMaxAllFallbackIterations = 10;

namespace detail {

inline bool is_symmetric(const Matrix& a, double tol = 1e-8) {
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace detail

/// (x - v)' A (x - v)
inline double gk_distance2(const Vector& x, const Vector& v, const Matrix& a) {
    if (x.size() != v.size() || a.rows() != x.size() || a.cols() != x.size())
        throw DimensionMismatch("gk_distance2: operand sizes disagree");
    if (!a.allFinite()) throw InvalidArgument("norm matrix has non-finite entries");
    if (!detail::is_symmetric(a)) throw InvalidArgument("norm matrix is not symmetric");
    const Vector diff = x - v;
    return std::max(0.0, diff.dot(a * diff));
}

/// Fuzzy covariance of cluster i:
///   sum_k u_ki^m (x_k - v)(x_k - v)' / sum_k u_ki^m
inline Matrix fuzzy_covariance(const Dataset& data, const MembershipMatrix& u, const Vector& center,
                               Index cluster, double m) {
    if (center.size() != data.dim()) throw DimensionMismatch("center dimension mismatch");
    if (u.points() != data.size() || cluster < 0 || cluster >= u.clusters())
        throw DimensionMismatch("fuzzy_covariance: membership shape or cluster index invalid");
    const Vector w = u.values().col(cluster).array().pow(m).matrix();
    const double mass = w.sum();
    if (!(mass > 0.0))
        throw InvalidArgument("cluster " + std::to_string(cluster) + " has zero membership mass");
    const Matrix y = data.points().rowwise() - center.transpose();
    Matrix c = (y.transpose() * w.asDiagonal() * y) / mass;
    return (c + c.transpose()) * 0.5;
}

/// (1 - gamma) C + gamma (trace(C)/d) I, or kCovarianceFloor * I when
/// trace(C) is zero.
inline Matrix regularize_covariance(const Matrix& c, double gamma) {
    const Index d = c.rows();
    const double trace = c.trace();
    if (!(trace > 0.0)) return kCovarianceFloor * Matrix::Identity(d, d);
    Matrix out = (1.0 - gamma) * c;
    out.diagonal().array() += gamma * trace / static_cast<double>(d);
    return out;
}

/// log det of a symmetric positive definite matrix, or nullopt if the
/// Cholesky factorization fails.
inline std::optional<double> log_det_spd(const Matrix& a) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const double ld = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    if (!std::isfinite(ld)) return std::nullopt;
    return ld;
}

/// A = (rho det C)^(1/d) C^-1, so that det A = rho. Returns nullopt when C
/// is not SPD, is too ill-conditioned to invert reliably, or the result is
/// not finite.
inline std::optional<Matrix> norm_matrix(const Matrix& c, double rho) {
    if (c.rows() != c.cols()) throw DimensionMismatch("covariance must be square");
    if (!(rho > 0.0)) throw InvalidArgument("cluster volume must be positive");
    const Index d = c.rows();
    if (!c.allFinite()) return std::nullopt;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
    if (eig.info() != Eigen::Success) return std::nullopt;
    const auto& lambda = eig.eigenvalues();  // ascending
    if (!(lambda(0) > 0.0) || lambda(d - 1) > kMaxCondition * lambda(0)) return std::nullopt;
    const double log_det = lambda.array().log().sum();
    const double scale = std::exp((std::log(rho) + log_det) / static_cast<double>(d));
    const Matrix& v = eig.eigenvectors();
    Matrix a = scale * v * lambda.cwiseInverse().asDiagonal() * v.transpose();
    a = (a + a.transpose()) * 0.5;
    if (!a.allFinite() || !std::isfinite(scale)) return std::nullopt;
    return a;
}

/// (x_k - v_i)' A_i (x_k - v_i) for every point and cluster (N x c).
inline Matrix gk_distances(const Dataset& data, const Matrix& centers,
                           const std::vector<Matrix>& norms) {
    if (centers.cols() != data.dim() || static_cast<Index>(norms.size()) != centers.rows())
        throw DimensionMismatch("gk_distances: centers or norm matrices do not match data");
    Matrix out(data.size(), centers.rows());
    for (Index i = 0; i < centers.rows(); ++i) {
        const Matrix& a = norms[static_cast<std::size_t>(i)];
        if (a.rows() != data.dim() || a.cols() != data.dim())
            throw DimensionMismatch("norm matrix " + std::to_string(i) + " has the wrong size");
        const Matrix y = data.points().rowwise() - centers.row(i);
        out.col(i) = (y * a).cwiseProduct(y).rowwise().sum().cwiseMax(0.0);
    }
    return out;
}

/// sum_i sum_k u_ki^m (x_k - v_i)' A_i (x_k - v_i)
inline double fgk_objective(const Dataset& data, const Matrix& centers, const MembershipMatrix& u,
                            const std::vector<Matrix>& norms, double m) {
    if (u.points() != data.size() || u.clusters() != centers.rows())
        throw DimensionMismatch("fgk_objective: membership matrix shape mismatch");
    const Matrix d2 = gk_distances(data, centers, norms);
    return (u.values().array().pow(m) * d2.array()).sum();
}

/// Gustafson-Kessel clustering from a caller-supplied initial membership
/// matrix. A cluster whose covariance cannot be turned into a norm matrix
/// (including a freshly re-seeded empty cluster) uses the identity for that
/// iteration; such events are counted on the model.
inline ClusterModel fgk_fit(const Dataset& data, const FgkConfig& config, MembershipMatrix initial,
                            const IterationObserver& observer = {}) {
    config.validate();
    detail::check_fit_shape(data, config.clusters, initial);

    const Index c = config.clusters;
    const Index d = data.dim();
    const double m = config.fuzzifier;

    ClusterModel model;
    model.seed = config.seed;
    model.fuzzifier = m;
    model.memberships = std::move(initial);
    std::vector<Matrix> norms(static_cast<std::size_t>(c), Matrix::Identity(d, d));
    std::vector<bool> fallback(static_cast<std::size_t>(c), false);
    int all_fallback_run = 0;

    for (int t = 1; t <= config.max_iterations; ++t) {
        CenterUpdate step = update_centers(data, model.memberships, m);
        model.centers = std::move(step.centers);
        if (!step.reseeded.empty()) {
            model.reseed_events += static_cast<int>(step.reseeded.size());
            model.reseed_iterations.push_back(t);
        }

        int fallbacks = 0;
        for (Index i = 0; i < c; ++i) {
            const auto slot = static_cast<std::size_t>(i);
            const bool reseeded =
                std::find(step.reseeded.begin(), step.reseeded.end(), i) != step.reseeded.end();
            std::optional<Matrix> a;
            if (!reseeded) {
                const Matrix cov = fuzzy_covariance(data, model.memberships,
                                                    model.centers.row(i).transpose(), i, m);
                a = norm_matrix(regularize_covariance(cov, config.cov_reg), config.volume(i));
            }
            fallback[slot] = !a.has_value();
            if (a) {
                norms[slot] = std::move(*a);
            } else {
                norms[slot] = Matrix::Identity(d, d);
                ++fallbacks;
            }
        }
        if (fallbacks > 0) {
            model.fallback_events += fallbacks;
            model.fallback_iterations.push_back(t);
        }
        all_fallback_run = fallbacks == c ? all_fallback_run + 1 : 0;
        if (all_fallback_run >= kMaxAllFallbackIterations)
            throw SolverAbort("every cluster fell back to the identity norm for " +
                              std::to_string(kMaxAllFallbackIterations) +
                              " consecutive iterations (seed " + std::to_string(config.seed) + ")");

        model.memberships = memberships_from_distances(gk_distances(data, model.centers, norms), m);
        const double j = fgk_objective(data, model.centers, model.memberships, norms, m);
        if (!std::isfinite(j))
            throw SolverAbort("Gustafson-Kessel objective became non-finite at iteration " +
                              std::to_string(t) + " (seed " + std::to_string(config.seed) + ")");
        model.objective_trace.push_back(j);
        model.iterations = t;
        if (observer)
            observer(IterationState{t, model.centers, model.memberships, j, &norms, &fallback,
                                    &step.reseeded});
        if (t >= 2 && detail::objective_settled(model.objective_trace[model.objective_trace.size() - 2],
                                                j, config.tolerance)) {
            model.converged = true;
            break;
        }
    }
    model.norm_matrices = std::move(norms);
    return model;
}

inline ClusterModel fgk_fit(const Dataset& data, const FgkConfig& config,
                            const IterationObserver& observer = {}) {
    config.validate();
    if (data.size() < config.clusters)
        throw InvalidArgument("need at least as many points (" + std::to_string(data.size()) +
                              ") as clusters (" + std::to_string(config.clusters) + ")");
    return fgk_fit(data, config, random_memberships(data.size(), config.clusters, config.seed),
                   observer);
}

}  // namespace fuzzyemb
