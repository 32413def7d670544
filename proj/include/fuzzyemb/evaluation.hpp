#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "fuzzyemb/core.hpp"
#include "fuzzyemb/corpus_io.hpp"
#include "fuzzyemb/fcm.hpp"
#include "fuzzyemb/fgk.hpp"

namespace fuzzyemb {

// ---------------------------------------------------------------------------
// Gold pairs and co-clustering

struct GoldPairSet {
    std::vector<ScoredWordPair> pairs;
    double threshold = 0.0;
};

/// Pairs scoring at least `threshold` (inclusive, raw 0-10 scale).
inline GoldPairSet extract_gold_pairs(const std::vector<ScoredWordPair>& pairs, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 10.0))
        throw InvalidArgument("gold threshold must lie in [0,10]");
    GoldPairSet gold;
    gold.threshold = threshold;
    std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(gold.pairs),
                 [&](const ScoredWordPair& p) { return p.score >= threshold; });
    return gold;
}

struct CoclusterCount {
    /// Gold pairs whose words share a hardened cluster.
    int count = 0;
    /// Gold pairs with both words present in the dataset.
    int considered = 0;
    /// Co-clustered pairs held by each cluster.
    std::vector<int> pairs_per_cluster;
    /// histogram[n] = number of clusters holding exactly n pairs.
    std::vector<int> histogram;
    /// Gold pairs with at least one word missing from the labels.
    std::vector<ScoredWordPair> excluded;
};

inline CoclusterCount count_cocluster_pairs(const HardAssignment& assignment,
                                            const std::vector<std::string>& labels,
                                            const GoldPairSet& gold) {
    if (assignment.cluster_of.size() != labels.size())
        throw DimensionMismatch("assignment and labels differ in length");
    std::unordered_map<std::string, Index> cluster_of;
    for (std::size_t k = 0; k < labels.size(); ++k) cluster_of.emplace(labels[k], assignment.cluster_of[k]);

    CoclusterCount out;
    out.pairs_per_cluster.assign(static_cast<std::size_t>(assignment.clusters), 0);
    for (const auto& p : gold.pairs) {
        const auto a = cluster_of.find(p.word_a);
        const auto b = cluster_of.find(p.word_b);
        if (a == cluster_of.end() || b == cluster_of.end()) {
            out.excluded.push_back(p);
            continue;
        }
        ++out.considered;
        if (a->second == b->second) {
            ++out.count;
            ++out.pairs_per_cluster[static_cast<std::size_t>(a->second)];
        }
    }
    const int most = out.pairs_per_cluster.empty()
                         ? 0
                         : *std::max_element(out.pairs_per_cluster.begin(), out.pairs_per_cluster.end());
    out.histogram.assign(static_cast<std::size_t>(most) + 1, 0);
    for (int n : out.pairs_per_cluster) ++out.histogram[static_cast<std::size_t>(n)];
    return out;
}

// ---------------------------------------------------------------------------
// Membership reports

struct ConfidenceCensus {
    int count = 0;
    std::vector<std::string> words;
};

/// Words whose largest membership is at least `threshold`.
inline ConfidenceCensus membership_confidence_census(const MembershipMatrix& u,
                                                     const std::vector<std::string>& labels,
                                                     double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw InvalidArgument("confidence threshold must lie in (0,1]");
    if (static_cast<Index>(labels.size()) != u.points())
        throw DimensionMismatch("labels and membership rows differ in count");
    ConfidenceCensus out;
    for (Index k = 0; k < u.points(); ++k)
        if (u.values().row(k).maxCoeff() >= threshold) out.words.push_back(labels[static_cast<std::size_t>(k)]);
    out.count = static_cast<int>(out.words.size());
    return out;
}

struct ClusterDegree {
    Index cluster = 0;
    double degree = 0.0;
};

struct TouchedCluster {
    Index cluster = 0;
    double degree = 0.0;
    /// Words hardened into this cluster, in dataset order.
    std::vector<std::string> members;
};

struct WordMembershipReport {
    std::string word;
    /// Degrees to every cluster, largest first (ties by cluster index).
    std::vector<ClusterDegree> degrees;
    double max_degree = 0.0;
    /// Clusters reached at or above the requested minimum degree.
    std::vector<TouchedCluster> touched;
};

/// Labels sharing the longest possible prefix with `word`, at most `limit`.
inline std::vector<std::string> prefix_candidates(const std::vector<std::string>& labels,
                                                  const std::string& word, std::size_t limit = 10) {
    for (std::size_t len = word.size(); len > 0; --len) {
        const std::string_view prefix(word.data(), len);
        std::vector<std::string> hits;
        for (const auto& l : labels)
            if (std::string_view(l).substr(0, len) == prefix) hits.push_back(l);
        if (!hits.empty()) {
            std::sort(hits.begin(), hits.end());
            if (hits.size() > limit) hits.resize(limit);
            return hits;
        }
    }
    return {};
}

inline WordMembershipReport word_report(const ClusterModel& model,
                                        const std::vector<std::string>& labels,
                                        const std::string& word, double min_degree) {
    const MembershipMatrix& u = model.memberships;
    if (static_cast<Index>(labels.size()) != u.points())
        throw DimensionMismatch("labels and membership rows differ in count");
    const auto it = std::find(labels.begin(), labels.end(), word);
    if (it == labels.end()) throw UnknownWord(word);
    const Index row = it - labels.begin();

    WordMembershipReport report;
    report.word = word;
    for (Index i = 0; i < u.clusters(); ++i) report.degrees.push_back({i, u(row, i)});
    std::stable_sort(report.degrees.begin(), report.degrees.end(),
                     [](const ClusterDegree& a, const ClusterDegree& b) { return a.degree > b.degree; });
    report.max_degree = report.degrees.front().degree;

    const HardAssignment hard = harden(u);
    for (const auto& cd : report.degrees) {
        if (cd.degree < min_degree) break;
        TouchedCluster tc{cd.cluster, cd.degree, {}};
        for (std::size_t k = 0; k < labels.size(); ++k)
            if (hard.cluster_of[k] == cd.cluster) tc.members.push_back(labels[k]);
        report.touched.push_back(std::move(tc));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Repeated runs

struct RunStats {
    std::vector<std::uint64_t> seeds;
    std::vector<double> per_seed_values;
    double mean = 0.0;
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    double std = 0.0;
    int n_runs = 0;
};

inline RunStats summarize(std::vector<double> values, std::vector<std::uint64_t> seeds = {}) {
    RunStats s;
    s.n_runs = static_cast<int>(values.size());
    if (!values.empty()) {
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - s.mean) * (v - s.mean);
            s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
    }
    s.per_seed_values = std::move(values);
    s.seeds = std::move(seeds);
    return s;
}

using SolverConfig = std::variant<FcmConfig, FgkConfig>;

/// Runs the configured solver with the given seed.
inline ClusterModel fit_model(const Dataset& data, SolverConfig config, std::uint64_t seed) {
    return std::visit(
        [&](auto& cfg) {
            cfg.seed = seed;
            if constexpr (std::is_same_v<std::decay_t<decltype(cfg)>, FgkConfig>)
                return fgk_fit(data, cfg);
            else
                return fcm_fit(data, cfg);
        },
        config);
}

inline Index cluster_count(const SolverConfig& config) {
    return std::visit([](const auto& cfg) { return cfg.clusters; }, config);
}

/// Fits with seeds seed_base, seed_base + 1, ... and evaluates `metric` on
/// each model. Solver errors are rethrown naming the seed.
template <class Metric>
RunStats repeated_runs(const Dataset& data, const SolverConfig& config, int n_runs,
                       std::uint64_t seed_base, Metric&& metric) {
    if (n_runs < 1) throw InvalidArgument("n_runs must be at least 1");
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < n_runs; ++r) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(r);
        ClusterModel model = [&] {
            try {
                return fit_model(data, config, seed);
            } catch (const SolverAbort&) {
                throw;
            } catch (const Error& e) {
                throw SolverAbort("seed " + std::to_string(seed) + ": " + e.what());
            }
        }();
        values.push_back(static_cast<double>(metric(model)));
        seeds.push_back(seed);
    }
    return summarize(std::move(values), std::move(seeds));
}

// ---------------------------------------------------------------------------
// Significance

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    /// Two-sided.
    double p_value = 1.0;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
inline WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw InvalidArgument("each sample needs at least 2 values");
    const RunStats sa = summarize(a);
    const RunStats sb = summarize(b);
    const double va = sa.std * sa.std / static_cast<double>(a.size());
    const double vb = sb.std * sb.std / static_cast<double>(b.size());
    if (va + vb == 0.0) throw InvalidArgument("both samples have zero variance");

    WelchResult r;
    r.t = (sa.mean - sb.mean) / std::sqrt(va + vb);
    r.dof = (va + vb) * (va + vb) /
            (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t dist(r.dof);
    r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
    return r;
}

}  // namespace fuzzyemb
