// fuzzyemb: fuzzy clustering experiments on word embeddings.
//
//   fuzzyemb cluster --embeddings glove.6B.50d.txt --wordsim combined.tab --out t1.json
//   fuzzyemb pairs   --embeddings glove.6B.50d.txt --wordsim combined.tab --clusters 50
//   fuzzyemb word    --embeddings glove.6B.50d.txt --wordsim combined.tab --word earning
//   fuzzyemb compare --a pairs50.json --b pairs100.json
//
// Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fuzzyemb/experiment.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Flags {
    std::string config_file;
    std::string out;
    fuzzyemb::ExperimentConfig cfg;
    std::string clusters;
    std::string compare_a;
    std::string compare_b;
};

std::vector<int> parse_cluster_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw fuzzyemb::InvalidArgument("bad cluster count '" + item + "' in --clusters");
        }
    }
    return out;
}

fuzzyemb::Json read_json(const std::string& path, const char* stage) {
    std::ifstream in(path);
    if (!in) throw fuzzyemb::StageError(stage, "cannot open '" + path + "'");
    try {
        return fuzzyemb::Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw fuzzyemb::StageError(stage, path + ": " + e.what());
    }
}

void write_document(const fuzzyemb::Json& doc, const std::string& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw fuzzyemb::StageError("output", "cannot write '" + out + "'");
    f << text;
    if (!f) throw fuzzyemb::StageError("output", "write to '" + out + "' failed");
}

// Options shared by the experiment subcommands. Values land in a scratch
// config; only flags actually given override the file/default layers.
void add_experiment_options(CLI::App* app, Flags& f) {
    auto& c = f.cfg;
    app->add_option("--config", f.config_file, "JSON config file (flags override it)");
    app->add_option("--algo", c.algorithm, "fcm or fgk");
    app->add_option("--embeddings", c.embeddings_path, "GloVe text file");
    app->add_option("--wordsim", c.wordsim_path, "WordSim-353 file (comma or tab separated)");
    app->add_option("--dims", c.dims, "expected embedding dimension (informational)");
    app->add_option("--clusters", f.clusters, "comma-separated cluster counts");
    app->add_option("--m", c.m, "fuzzifier (> 1)");
    app->add_option("--tol", c.tol, "relative objective-change tolerance");
    app->add_option("--max-iter", c.max_iter, "iteration cap per fit");
    app->add_option("--runs", c.n_runs, "seeds per cluster count");
    app->add_option("--seed", c.seed_base, "first seed");
    app->add_option("--gold-threshold", c.gold_threshold, "gold pair score threshold (0-10)");
    app->add_option("--confidence-threshold", c.confidence_threshold, "max-membership census threshold");
    app->add_option("--cov-reg", c.cov_reg, "Gustafson-Kessel covariance regularization weight");
    app->add_option("--word", c.word, "word to report (word command)");
    app->add_option("--min-degree", c.min_degree, "smallest membership degree to report");
    app->add_option("--out", f.out, "output file (default stdout)");
}

// Defaults, then config file, then explicitly given flags.
fuzzyemb::ExperimentConfig resolve(const CLI::App* app, const Flags& f) {
    fuzzyemb::ExperimentConfig cfg;
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw fuzzyemb::InvalidArgument("cannot open config file '" + f.config_file + "'");
        fuzzyemb::Json j;
        try {
            j = fuzzyemb::Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw fuzzyemb::InvalidArgument(f.config_file + ": " + e.what());
        }
        fuzzyemb::apply_json(cfg, j);
    }
    const auto given = [&](const char* name) { return app->count(name) > 0; };
    const auto& s = f.cfg;
    if (given("--algo")) cfg.algorithm = s.algorithm;
    if (given("--embeddings")) cfg.embeddings_path = s.embeddings_path;
    if (given("--wordsim")) cfg.wordsim_path = s.wordsim_path;
    if (given("--dims")) cfg.dims = s.dims;
    if (given("--clusters")) cfg.clusters = parse_cluster_list(f.clusters);
    if (given("--m")) cfg.m = s.m;
    if (given("--tol")) cfg.tol = s.tol;
    if (given("--max-iter")) cfg.max_iter = s.max_iter;
    if (given("--runs")) cfg.n_runs = s.n_runs;
    if (given("--seed")) cfg.seed_base = s.seed_base;
    if (given("--gold-threshold")) cfg.gold_threshold = s.gold_threshold;
    if (given("--confidence-threshold")) cfg.confidence_threshold = s.confidence_threshold;
    if (given("--cov-reg")) cfg.cov_reg = s.cov_reg;
    if (given("--word")) cfg.word = s.word;
    if (given("--min-degree")) cfg.min_degree = s.min_degree;
    cfg.validate();
    if (cfg.embeddings_path.empty() || cfg.wordsim_path.empty())
        throw fuzzyemb::InvalidArgument("--embeddings and --wordsim are required");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy C-means / Gustafson-Kessel clustering of word embeddings"};
    app.require_subcommand(1);

    Flags cluster_flags, pairs_flags, word_flags, compare_flags;
    auto* cluster = app.add_subcommand("cluster", "validity indices and assignments per (c, seed)");
    auto* pairs = app.add_subcommand("pairs", "gold-pair co-clustering counts over repeated seeds");
    auto* word = app.add_subcommand("word", "soft-membership report for one word");
    auto* compare = app.add_subcommand("compare", "Welch t-test between two pairs documents");
    add_experiment_options(cluster, cluster_flags);
    add_experiment_options(pairs, pairs_flags);
    add_experiment_options(word, word_flags);
    compare->add_option("--a", compare_flags.compare_a, "first pairs document")->required();
    compare->add_option("--b", compare_flags.compare_b, "second pairs document")->required();
    compare->add_option("--out", compare_flags.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compare->parsed()) {
            const auto a = read_json(compare_flags.compare_a, "compare");
            const auto b = read_json(compare_flags.compare_b, "compare");
            write_document(fuzzyemb::run_compare(a, b), compare_flags.out);
            return 0;
        }

        CLI::App* sub = cluster->parsed() ? cluster : pairs->parsed() ? pairs : word;
        const Flags& flags = sub == cluster ? cluster_flags : sub == pairs ? pairs_flags : word_flags;
        fuzzyemb::ExperimentConfig cfg;
        try {
            cfg = resolve(sub, flags);
            if (sub == word && cfg.word.empty()) throw fuzzyemb::InvalidArgument("--word is required");
        } catch (const fuzzyemb::InvalidArgument& e) {
            std::cerr << "usage error: " << e.what() << "\n";
            return kExitUsage;
        }

        const fuzzyemb::Corpus corpus = fuzzyemb::load_corpus(cfg);
        for (const auto& w : corpus.missing)
            std::cerr << "warning: '" << w << "' has no embedding\n";
        fuzzyemb::Json doc;
        if (sub == cluster)
            doc = fuzzyemb::run_cluster(cfg, corpus);
        else if (sub == pairs)
            doc = fuzzyemb::run_pairs(cfg, corpus);
        else
            doc = fuzzyemb::run_word(cfg, corpus);
        for (const auto& w : doc.value("warnings", fuzzyemb::Json::array()))
            std::cerr << "warning: " << w.get<std::string>() << "\n";
        write_document(doc, flags.out);
        return 0;
    } catch (const fuzzyemb::StageError& e) {
        std::cerr << "error in " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
