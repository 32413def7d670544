#include <gtest/gtest.h>

#include "fuzzyemb/experiment.hpp"

using namespace fuzzyemb;

namespace {

ExperimentConfig toy_config() {
    ExperimentConfig c;
    c.embeddings_path = FUZZYEMB_TEST_DATA_DIR "/toy_vectors.txt";
    c.wordsim_path = FUZZYEMB_TEST_DATA_DIR "/toy_wordsim.csv";
    c.clusters = {3, 4};
    c.n_runs = 3;
    c.seed_base = 11;
    return c;
}

}  // namespace

TEST(ExperimentConfig, Defaults) {
    const ExperimentConfig c;
    EXPECT_EQ(c.m, 1.1);
    EXPECT_EQ(c.tol, 1e-6);
    EXPECT_EQ(c.max_iter, 300);
    EXPECT_EQ(c.n_runs, 10);
    EXPECT_EQ(c.gold_threshold, 7.5);
    EXPECT_EQ(c.confidence_threshold, 0.75);
    EXPECT_EQ(c.clusters, (std::vector<int>{10, 15, 20, 25, 30, 40, 50}));
}

TEST(ExperimentConfig, ValidationErrors) {
    ExperimentConfig c;
    c.algorithm = "kmeans";
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.clusters = {};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.clusters = {10, 1};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.gold_threshold = 11;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.confidence_threshold = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(ExperimentConfig, JsonOverlayRoundTrip) {
    ExperimentConfig a = toy_config();
    a.algorithm = "fgk";
    a.m = 1.25;
    a.word = "cash";
    ExperimentConfig b;
    apply_json(b, to_json(a));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());

    ExperimentConfig partial;
    apply_json(partial, Json{{"m", 2.0}});
    EXPECT_EQ(partial.m, 2.0);
    EXPECT_EQ(partial.n_runs, 10);
    EXPECT_THROW(apply_json(partial, Json{{"fuzzifier", 2.0}}), InvalidArgument);
    EXPECT_THROW(apply_json(partial, Json{{"m", "two"}}), InvalidArgument);
}

TEST(LoadCorpus, ToyFiles) {
    const Corpus corpus = load_corpus(toy_config());
    EXPECT_EQ(corpus.pairs.size(), 11u);
    EXPECT_EQ(corpus.dataset.size(), 15);
    EXPECT_EQ(corpus.dataset.dim(), 4);
    EXPECT_EQ(corpus.missing, (std::vector<std::string>{"unicorn"}));
}

TEST(LoadCorpus, StageErrors) {
    auto c = toy_config();
    c.embeddings_path = "/nonexistent/vectors.txt";
    try {
        load_corpus(c);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "embeddings");
    }
    c = toy_config();
    c.wordsim_path = "/nonexistent/ws.csv";
    try {
        load_corpus(c);
        FAIL();
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "wordsim");
    }
    c = toy_config();
    c.dims = 50;
    EXPECT_THROW(load_corpus(c), StageError);
}

TEST(RunCluster, DocumentShape) {
    const auto cfg = toy_config();
    const Json doc = run_cluster(cfg, load_corpus(cfg));
    EXPECT_EQ(doc["command"], "cluster");
    EXPECT_EQ(doc["config"]["seed"], 11);
    ASSERT_EQ(doc["runs"].size(), 6u);
    const auto& run = doc["runs"][0];
    EXPECT_EQ(run["clusters"], 3);
    EXPECT_EQ(run["seed"], 11);
    EXPECT_TRUE(run["fpc"].is_number());
    EXPECT_TRUE(run["xie_beni"].is_number());
    EXPECT_EQ(run["assignments"].size(), 15u);
    EXPECT_TRUE(run["assignments"].contains("cash"));
    ASSERT_EQ(doc["summary"].size(), 2u);
    EXPECT_EQ(doc["summary"][1]["clusters"], 4);

    // Keys appear in a fixed order.
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"command", "config", "input", "runs", "summary"}));
}

TEST(RunCluster, ToyGroupsRecovered) {
    auto cfg = toy_config();
    cfg.clusters = {3};
    cfg.n_runs = 1;
    const Json doc = run_cluster(cfg, load_corpus(cfg));
    const auto& a = doc["runs"][0]["assignments"];
    EXPECT_EQ(a["cat"], a["tiger"]);
    EXPECT_EQ(a["cash"], a["profit"]);
    EXPECT_EQ(a["soccer"], a["team"]);
    EXPECT_NE(a["cat"], a["cash"]);
    EXPECT_NE(a["cash"], a["soccer"]);
}

TEST(RunCluster, ByteIdenticalAcrossInvocations) {
    for (const char* algo : {"fcm", "fgk"}) {
        auto cfg = toy_config();
        cfg.algorithm = algo;
        const auto corpus = load_corpus(cfg);
        EXPECT_EQ(run_cluster(cfg, corpus).dump(2), run_cluster(cfg, load_corpus(cfg)).dump(2));
    }
}

TEST(RunCluster, FgkRecordsFallbackCounts) {
    auto cfg = toy_config();
    cfg.algorithm = "fgk";
    const Json doc = run_cluster(cfg, load_corpus(cfg));
    for (const auto& run : doc["runs"]) EXPECT_TRUE(run["fallback_events"].is_number_integer());
}

TEST(RunPairs, CountsAndStats) {
    auto cfg = toy_config();
    cfg.clusters = {3};
    const Json doc = run_pairs(cfg, load_corpus(cfg));
    EXPECT_EQ(doc["gold"]["pairs"], 7);
    EXPECT_EQ(doc["gold"]["considered"], 7);
    EXPECT_EQ(doc["gold"]["excluded"].size(), 0u);
    const auto& r = doc["results"][0];
    EXPECT_EQ(r["counts"].size(), 3u);
    // The three groups are well separated: every within-group gold pair co-clusters.
    for (const auto& c : r["counts"]) EXPECT_EQ(c, 7);
    EXPECT_EQ(r["std"], 0.0);
    EXPECT_EQ(doc["comparison_clusters"], 3);
}

TEST(RunPairs, EmptyGoldSetWarns) {
    auto cfg = toy_config();
    cfg.gold_threshold = 9.9;
    cfg.n_runs = 1;
    const Json doc = run_pairs(cfg, load_corpus(cfg));
    EXPECT_EQ(doc["warnings"].size(), 1u);
    EXPECT_EQ(doc["results"][0]["counts"][0], 0);
}

TEST(RunPairs, ExcludedPairsReported) {
    auto cfg = toy_config();
    cfg.gold_threshold = 5.0;
    cfg.n_runs = 1;
    const Json doc = run_pairs(cfg, load_corpus(cfg));
    ASSERT_EQ(doc["gold"]["excluded"].size(), 1u);
    EXPECT_EQ(doc["gold"]["excluded"][0][1], "unicorn");
}

TEST(RunWord, ReportAndMembers) {
    auto cfg = toy_config();
    cfg.word = "Profit";
    cfg.min_degree = 0.0;
    const Json doc = run_word(cfg, load_corpus(cfg));
    EXPECT_EQ(doc["report"]["word"], "profit");
    EXPECT_EQ(doc["report"]["degrees"].size(), 3u);
    double sum = 0;
    for (const auto& d : doc["report"]["degrees"]) sum += d["degree"].get<double>();
    EXPECT_NEAR(sum, 1.0, 1e-9);
    const auto& top = doc["report"]["touched"][0]["members"];
    EXPECT_NE(std::find(top.begin(), top.end(), "money"), top.end());
}

TEST(RunWord, UnknownWordListsCandidates) {
    auto cfg = toy_config();
    cfg.word = "tennisball";
    try {
        run_word(cfg, load_corpus(cfg));
        FAIL();
    } catch (const StageError& e) {
        EXPECT_NE(std::string(e.what()).find("tennis"), std::string::npos) << e.what();
    }
}

TEST(RunCompare, WelchOnPairsDocuments) {
    auto cfg = toy_config();
    cfg.clusters = {4};
    cfg.n_runs = 4;
    const auto corpus = load_corpus(cfg);
    const Json a = run_pairs(cfg, corpus);
    Json b = a;
    b["results"][0]["counts"] = Json::array({1, 2, 1, 2});
    const Json doc = run_compare(a, b);
    ASSERT_EQ(doc["results"].size(), 1u);
    EXPECT_EQ(doc["results"][0]["clusters"], 4);
    EXPECT_TRUE(doc["results"][0].contains("p_value") || doc["results"][0].contains("error"));
    EXPECT_THROW(run_compare(a, Json{{"command", "cluster"}}), InvalidArgument);
}
