#pragma once

// Experiment drivers behind the command-line tool. Each run_* function turns
// a resolved ExperimentConfig plus loaded inputs into one JSON document whose
// field order is fixed, so identical inputs give byte-identical output.

#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "fuzzyemb/core.hpp"
#include "fuzzyemb/corpus_io.hpp"
#include "fuzzyemb/evaluation.hpp"
#include "fuzzyemb/fcm.hpp"
#include "fuzzyemb/fgk.hpp"
#include "fuzzyemb/validity.hpp"

namespace fuzzyemb {

using Json = nlohmann::ordered_json;

/// An error tagged with the pipeline stage it came from.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct ExperimentConfig {
    std::string algorithm = "fcm";
    std::string embeddings_path;
    std::string wordsim_path;
    /// Informational; 0 means "whatever the embedding file holds".
    int dims = 0;
    std::vector<int> clusters{10, 15, 20, 25, 30, 40, 50};
    double m = 1.1;
    double tol = 1e-6;
    int max_iter = 300;
    int n_runs = 10;
    std::uint64_t seed_base = 0;
    double gold_threshold = 7.5;
    double confidence_threshold = 0.75;
    double cov_reg = 1e-4;
    std::string word;
    double min_degree = 0.10;

    void validate() const {
        if (algorithm != "fcm" && algorithm != "fgk")
            throw InvalidArgument("unknown algorithm '" + algorithm + "' (expected fcm or fgk)");
        if (clusters.empty()) throw InvalidArgument("cluster list is empty");
        for (int c : clusters)
            if (c < 2) throw InvalidArgument("every cluster count must be at least 2");
        if (!(m > 1.0)) throw InvalidArgument("fuzzifier m must exceed 1");
        if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
        if (max_iter < 1) throw InvalidArgument("max-iter must be at least 1");
        if (n_runs < 1) throw InvalidArgument("runs must be at least 1");
        if (!(gold_threshold >= 0.0 && gold_threshold <= 10.0))
            throw InvalidArgument("gold threshold must lie in [0,10]");
        if (!(confidence_threshold > 0.0 && confidence_threshold <= 1.0))
            throw InvalidArgument("confidence threshold must lie in (0,1]");
        if (!(cov_reg >= 0.0 && cov_reg < 1.0))
            throw InvalidArgument("covariance regularization must lie in [0,1)");
        if (!(min_degree >= 0.0 && min_degree <= 1.0))
            throw InvalidArgument("min degree must lie in [0,1]");
    }

    SolverConfig solver(int c) const {
        FcmConfig base;
        base.clusters = c;
        base.fuzzifier = m;
        base.tolerance = tol;
        base.max_iterations = max_iter;
        base.seed = seed_base;
        if (algorithm == "fgk") {
            FgkConfig g;
            static_cast<FcmConfig&>(g) = base;
            g.cov_reg = cov_reg;
            return g;
        }
        return base;
    }
};

inline Json to_json(const ExperimentConfig& c) {
    Json j;
    j["algorithm"] = c.algorithm;
    j["embeddings"] = c.embeddings_path;
    j["wordsim"] = c.wordsim_path;
    j["dims"] = c.dims;
    j["clusters"] = c.clusters;
    j["m"] = c.m;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["runs"] = c.n_runs;
    j["seed"] = c.seed_base;
    j["gold_threshold"] = c.gold_threshold;
    j["confidence_threshold"] = c.confidence_threshold;
    j["cov_reg"] = c.cov_reg;
    j["word"] = c.word;
    j["min_degree"] = c.min_degree;
    return j;
}

/// Overlays the fields present in `j` onto `c`. Unknown keys are rejected.
inline void apply_json(ExperimentConfig& c, const Json& j) {
    if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "algorithm") c.algorithm = value.get<std::string>();
            else if (key == "embeddings") c.embeddings_path = value.get<std::string>();
            else if (key == "wordsim") c.wordsim_path = value.get<std::string>();
            else if (key == "dims") c.dims = value.get<int>();
            else if (key == "clusters") c.clusters = value.get<std::vector<int>>();
            else if (key == "m") c.m = value.get<double>();
            else if (key == "tol") c.tol = value.get<double>();
            else if (key == "max_iter") c.max_iter = value.get<int>();
            else if (key == "runs") c.n_runs = value.get<int>();
            else if (key == "seed") c.seed_base = value.get<std::uint64_t>();
            else if (key == "gold_threshold") c.gold_threshold = value.get<double>();
            else if (key == "confidence_threshold") c.confidence_threshold = value.get<double>();
            else if (key == "cov_reg") c.cov_reg = value.get<double>();
            else if (key == "word") c.word = value.get<std::string>();
            else if (key == "min_degree") c.min_degree = value.get<double>();
            else throw InvalidArgument("unknown config key '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument("config key '" + key + "': " + e.what());
        }
    }
}

/// Inputs shared by every command.
struct Corpus {
    std::vector<ScoredWordPair> pairs;
    std::vector<std::string> vocabulary;
    Dataset dataset;
    std::vector<std::string> missing;
    std::vector<EmbeddingTable::Duplicate> duplicates;
};

inline Corpus make_corpus(std::vector<ScoredWordPair> pairs, const EmbeddingTable& table) {
    auto vocabulary = pair_vocabulary(pairs);
    auto built = build_dataset(table, vocabulary);
    return Corpus{std::move(pairs), std::move(vocabulary), std::move(built.dataset),
                  std::move(built.missing), table.duplicates()};
}

inline Corpus load_corpus(const ExperimentConfig& config) {
    std::vector<ScoredWordPair> pairs;
    {
        std::ifstream in(config.wordsim_path);
        if (!in) throw StageError("wordsim", "cannot open '" + config.wordsim_path + "'");
        try {
            pairs = load_wordsim(in);
        } catch (const Error& e) {
            throw StageError("wordsim", config.wordsim_path + ": " + e.what());
        }
    }
    const auto vocabulary = pair_vocabulary(pairs);
    const std::unordered_set<std::string> filter(vocabulary.begin(), vocabulary.end());
    EmbeddingTable table;
    {
        std::ifstream in(config.embeddings_path);
        if (!in) throw StageError("embeddings", "cannot open '" + config.embeddings_path + "'");
        try {
            table = load_embeddings(in, &filter);
        } catch (const Error& e) {
            throw StageError("embeddings", config.embeddings_path + ": " + e.what());
        }
    }
    if (config.dims != 0 && table.size() != 0 && table.dim() != config.dims)
        throw StageError("embeddings", "expected " + std::to_string(config.dims) +
                                           "-dimensional vectors, file has " +
                                           std::to_string(table.dim()));
    try {
        return make_corpus(std::move(pairs), table);
    } catch (const Error& e) {
        throw StageError("dataset", e.what());
    }
}

namespace detail {

inline Json input_json(const Corpus& corpus) {
    Json j;
    j["pairs"] = corpus.pairs.size();
    j["vocabulary"] = corpus.vocabulary.size();
    j["points"] = corpus.dataset.size();
    j["dim"] = corpus.dataset.dim();
    j["missing_words"] = corpus.missing;
    Json dups = Json::array();
    for (const auto& d : corpus.duplicates) dups.push_back({{"word", d.word}, {"line", d.line}});
    j["duplicate_embeddings"] = std::move(dups);
    return j;
}

inline Json pair_json(const ScoredWordPair& p) {
    return Json::array({p.word_a, p.word_b, p.score});
}

inline Json stats_json(const RunStats& s) {
    return Json{{"mean", s.mean}, {"std", s.std}};
}

inline ClusterModel fit_stage(const Dataset& data, const ExperimentConfig& config, int c,
                              std::uint64_t seed) {
    try {
        return fit_model(data, config.solver(c), seed);
    } catch (const Error& e) {
        throw StageError("solver", "c=" + std::to_string(c) + " seed=" + std::to_string(seed) +
                                       ": " + e.what());
    }
}

inline std::vector<std::uint64_t> seeds_of(const ExperimentConfig& config) {
    std::vector<std::uint64_t> out;
    for (int r = 0; r < config.n_runs; ++r) out.push_back(config.seed_base + static_cast<std::uint64_t>(r));
    return out;
}

}  // namespace detail

/// One fit per (c, seed): validity indices, convergence data and hardened
/// assignments, plus a per-c summary table.
inline Json run_cluster(const ExperimentConfig& config, const Corpus& corpus) {
    config.validate();
    const Dataset& data = corpus.dataset;
    Json doc;
    doc["command"] = "cluster";
    doc["config"] = to_json(config);
    doc["input"] = detail::input_json(corpus);

    Json runs = Json::array();
    Json summary = Json::array();
    for (int c : config.clusters) {
        std::vector<double> fpcs;
        std::vector<double> xbs;
        for (std::uint64_t seed : detail::seeds_of(config)) {
            const ClusterModel model = detail::fit_stage(data, config, c, seed);
            Json run;
            run["clusters"] = c;
            run["seed"] = seed;
            run["iterations"] = model.iterations;
            run["converged"] = model.converged;
            run["objective"] = model.objective_trace.back();
            run["fpc"] = fpc(model.memberships);
            fpcs.push_back(run["fpc"].get<double>());
            try {
                const double xb = xie_beni(data, model.centers, model.memberships, model.fuzzifier);
                run["xie_beni"] = xb;
                xbs.push_back(xb);
            } catch (const DegenerateSeparation& e) {
                run["xie_beni"] = nullptr;
                run["xie_beni_error"] = e.what();
            }
            run["confident_words"] =
                membership_confidence_census(model.memberships, data.labels(), config.confidence_threshold)
                    .count;
            run["fallback_events"] = model.fallback_events;
            run["reseed_events"] = model.reseed_events;
            const HardAssignment hard = harden(model.memberships);
            Json assign = Json::object();
            for (std::size_t k = 0; k < hard.cluster_of.size(); ++k)
                assign[data.labels()[k]] = hard.cluster_of[k];
            run["assignments"] = std::move(assign);
            runs.push_back(std::move(run));
        }
        Json row;
        row["clusters"] = c;
        row["fpc"] = detail::stats_json(summarize(fpcs));
        row["xie_beni"] = xbs.empty() ? Json(nullptr) : detail::stats_json(summarize(xbs));
        summary.push_back(std::move(row));
    }
    doc["runs"] = std::move(runs);
    doc["summary"] = std::move(summary);
    return doc;
}

/// Gold-pair co-clustering counts over repeated seeds for each c.
inline Json run_pairs(const ExperimentConfig& config, const Corpus& corpus) {
    config.validate();
    const Dataset& data = corpus.dataset;
    const GoldPairSet gold = extract_gold_pairs(corpus.pairs, config.gold_threshold);

    Json doc;
    doc["command"] = "pairs";
    doc["config"] = to_json(config);
    doc["input"] = detail::input_json(corpus);

    Json warnings = Json::array();
    if (gold.pairs.empty())
        warnings.push_back("gold set is empty: no pair scores at least " +
                           std::to_string(config.gold_threshold));

    Json results = Json::array();
    Json gold_doc;
    for (int c : config.clusters) {
        Json per_seed = Json::array();
        std::vector<double> counts;
        CoclusterCount last;
        for (std::uint64_t seed : detail::seeds_of(config)) {
            const ClusterModel model = detail::fit_stage(data, config, c, seed);
            last = count_cocluster_pairs(harden(model.memberships), data.labels(), gold);
            counts.push_back(last.count);
            per_seed.push_back({{"seed", seed},
                                {"count", last.count},
                                {"histogram", last.histogram},
                                {"pairs_per_cluster", last.pairs_per_cluster}});
        }
        if (gold_doc.is_null()) {
            gold_doc["threshold"] = gold.threshold;
            gold_doc["pairs"] = gold.pairs.size();
            gold_doc["considered"] = last.considered;
            Json excl = Json::array();
            for (const auto& p : last.excluded) excl.push_back(detail::pair_json(p));
            gold_doc["excluded"] = std::move(excl);
        }
        const RunStats stats = summarize(counts, detail::seeds_of(config));
        results.push_back({{"clusters", c},
                           {"counts", stats.per_seed_values},
                           {"mean", stats.mean},
                           {"std", stats.std},
                           {"runs", std::move(per_seed)}});
    }
    doc["gold"] = std::move(gold_doc);
    doc["warnings"] = std::move(warnings);
    doc["results"] = std::move(results);
    doc["comparison_clusters"] = *std::max_element(config.clusters.begin(), config.clusters.end());
    return doc;
}

/// Soft-membership report for one word, using the first cluster count and
/// the base seed.
inline Json run_word(const ExperimentConfig& config, const Corpus& corpus) {
    config.validate();
    if (config.word.empty()) throw InvalidArgument("a word is required");
    const Dataset& data = corpus.dataset;
    const std::string word = detail::lowercase(config.word);
    const auto& labels = data.labels();
    if (std::find(labels.begin(), labels.end(), word) == labels.end()) {
        std::string msg = "unknown word '" + word + "'";
        const auto near = prefix_candidates(labels, word);
        if (!near.empty()) {
            msg += "; candidates:";
            for (const auto& w : near) msg += " " + w;
        }
        throw StageError("report", msg);
    }

    const int c = config.clusters.front();
    const ClusterModel model = detail::fit_stage(data, config, c, config.seed_base);
    const WordMembershipReport report = word_report(model, labels, word, config.min_degree);

    Json doc;
    doc["command"] = "word";
    doc["config"] = to_json(config);
    doc["input"] = detail::input_json(corpus);
    doc["model"] = {{"clusters", c},
                    {"seed", config.seed_base},
                    {"iterations", model.iterations},
                    {"converged", model.converged},
                    {"fpc", fpc(model.memberships)}};
    Json degrees = Json::array();
    for (const auto& d : report.degrees) degrees.push_back({{"cluster", d.cluster}, {"degree", d.degree}});
    Json touched = Json::array();
    for (const auto& t : report.touched)
        touched.push_back({{"cluster", t.cluster}, {"degree", t.degree}, {"members", t.members}});
    doc["report"] = {{"word", report.word},
                     {"max_degree", report.max_degree},
                     {"degrees", std::move(degrees)},
                     {"touched", std::move(touched)}};
    return doc;
}

/// Welch tests between the per-seed counts of two `pairs` documents, for
/// every cluster count present in both.
inline Json run_compare(const Json& a, const Json& b) {
    for (const Json* d : {&a, &b})
        if (!d->is_object() || d->value("command", "") != "pairs")
            throw InvalidArgument("compare expects two documents produced by the pairs command");
    Json results = Json::array();
    for (const auto& ra : a.at("results")) {
        for (const auto& rb : b.at("results")) {
            if (ra.at("clusters") != rb.at("clusters")) continue;
            const auto xa = ra.at("counts").get<std::vector<double>>();
            const auto xb = rb.at("counts").get<std::vector<double>>();
            Json row{{"clusters", ra.at("clusters")}, {"mean_a", ra.at("mean")}, {"mean_b", rb.at("mean")}};
            try {
                const WelchResult w = welch_t_test(xa, xb);
                row["t"] = w.t;
                row["dof"] = w.dof;
                row["p_value"] = w.p_value;
            } catch (const InvalidArgument& e) {
                row["error"] = e.what();
            }
            results.push_back(std::move(row));
        }
    }
    Json doc;
    doc["command"] = "compare";
    doc["a"] = a.at("config");
    doc["b"] = b.at("config");
    doc["results"] = std::move(results);
    return doc;
}

}  // namespace fuzzyemb
