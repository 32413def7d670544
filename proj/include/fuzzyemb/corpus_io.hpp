#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fuzzyemb/core.hpp"

namespace fuzzyemb {

/// Word vectors in file order.
class EmbeddingTable {
public:
    struct Duplicate {
        std::string word;
        std::size_t line = 0;
    };

    EmbeddingTable() = default;
    explicit EmbeddingTable(Index dim) : dim_(dim) {}

    Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    /// Words seen again after their first occurrence; the first one was kept.
    const std::vector<Duplicate>& duplicates() const noexcept { return duplicates_; }

    bool contains(const std::string& word) const { return index_.count(word) != 0; }

    /// Coordinates of `word`, or nullopt.
    std::optional<Eigen::Map<const Vector>> find(const std::string& word) const {
        const auto it = index_.find(word);
        if (it == index_.end()) return std::nullopt;
        return Eigen::Map<const Vector>(coords_.data() + it->second * static_cast<std::size_t>(dim_),
                                        dim_);
    }

    /// Appends a word. Returns false (and leaves the table unchanged) if the
    /// word is already present.
    bool add(const std::string& word, const double* values) {
        if (index_.count(word)) return false;
        index_.emplace(word, words_.size());
        words_.push_back(word);
        coords_.insert(coords_.end(), values, values + dim_);
        return true;
    }

    void note_duplicate(std::string word, std::size_t line) {
        duplicates_.push_back({std::move(word), line});
    }

    friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
        return a.dim_ == b.dim_ && a.words_ == b.words_ && a.coords_ == b.coords_;
    }

private:
    Index dim_ = 0;
    std::vector<std::string> words_;
    std::vector<double> coords_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Duplicate> duplicates_;
};

struct ScoredWordPair {
    std::string word_a;
    std::string word_b;
    double score = 0.0;

    friend bool operator==(const ScoredWordPair&, const ScoredWordPair&) = default;
};

namespace detail {

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline void split_fields(std::string_view line, char delim, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (start <= line.size()) {
        const auto pos = line.find(delim, start);
        const auto end = pos == std::string_view::npos ? line.size() : pos;
        out.push_back(line.substr(start, end - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
}

inline void split_whitespace(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
}

inline std::optional<double> parse_real(std::string_view s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline bool getline_stripped(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace detail

/// Reads GloVe text format: "word c1 c2 ... cd" per line, no header. The
/// dimension comes from the first line and every later line must match it.
/// With a filter, only listed words are kept; the fields of other lines are
/// counted but not parsed.
inline EmbeddingTable load_embeddings(std::istream& in,
                                      const std::unordered_set<std::string>* filter = nullptr) {
    EmbeddingTable table;
    std::string line;
    std::vector<std::string_view> fields;
    std::vector<double> values;
    std::size_t line_no = 0;
    bool have_dim = false;

    while (detail::getline_stripped(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        detail::split_whitespace(line, fields);
        if (fields.size() < 2) throw ParseError("expected a word followed by coordinates", line_no);
        const auto dim = static_cast<Index>(fields.size() - 1);
        if (!have_dim) {
            table = EmbeddingTable(dim);
            have_dim = true;
        } else if (dim != table.dim()) {
            throw ParseError("inconsistent dimension: expected " + std::to_string(table.dim()) +
                                 " coordinates, found " + std::to_string(dim),
                             line_no);
        }
        std::string word(fields[0]);
        if (filter && !filter->count(word)) continue;

        values.resize(static_cast<std::size_t>(dim));
        for (std::size_t j = 1; j < fields.size(); ++j) {
            const auto v = detail::parse_real(fields[j]);
            if (!v)
                throw ParseError("unparseable coordinate '" + std::string(fields[j]) + "'",
                                 line_no);
            values[j - 1] = *v;
        }
        if (!table.add(word, values.data())) table.note_duplicate(std::move(word), line_no);
    }
    return table;
}

/// Writes the table in the format load_embeddings() reads, using the
/// shortest decimal form that round-trips each coordinate.
inline void save_embeddings(std::ostream& out, const EmbeddingTable& table) {
    std::array<char, 64> buf{};
    for (const auto& word : table.words()) {
        out << word;
        const auto v = *table.find(word);
        for (Index j = 0; j < v.size(); ++j) {
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v(j));
            out << ' ' << std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
        }
        out << '\n';
    }
}

/// Reads a word-similarity file: comma- or tab-separated "word,word,score"
/// rows (extra columns ignored). Blank lines and lines starting with '#' are
/// skipped; the first data row is treated as a header when its third field
/// is not numeric. Words are lowercased.
inline std::vector<ScoredWordPair> load_wordsim(std::istream& in) {
    std::vector<ScoredWordPair> pairs;
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    bool first_row = true;

    while (detail::getline_stripped(in, line)) {
        ++line_no;
        const std::string_view body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const char delim = body.find('\t') != std::string_view::npos ? '\t' : ',';
        detail::split_fields(body, delim, fields);
        if (fields.size() < 3)
            throw ParseError("expected at least 3 fields (word, word, score)", line_no);

        const auto score = detail::parse_real(detail::trim(fields[2]));
        if (!score) {
            if (first_row) {
                first_row = false;
                continue;
            }
            throw ParseError("score '" + std::string(fields[2]) + "' is not a number", line_no);
        }
        first_row = false;
        if (*score < 0.0 || *score > 10.0)
            throw ParseError("score " + std::string(fields[2]) + " outside [0,10]", line_no);
        auto a = detail::lowercase(detail::trim(fields[0]));
        auto b = detail::lowercase(detail::trim(fields[1]));
        if (a.empty() || b.empty()) throw ParseError("empty word field", line_no);
        pairs.push_back({std::move(a), std::move(b), *score});
    }
    return pairs;
}

/// Distinct words of a pair list in order of first appearance.
inline std::vector<std::string> pair_vocabulary(const std::vector<ScoredWordPair>& pairs) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& p : pairs)
        for (const auto* w : {&p.word_a, &p.word_b})
            if (seen.insert(*w).second) out.push_back(*w);
    return out;
}

struct DatasetBuild {
    Dataset dataset;
    /// Requested words absent from the table, in request order.
    std::vector<std::string> missing;
};

/// Dataset over the requested words that the table knows, in request order.
/// Words are lowercased before lookup; repeated requests are ignored.
inline DatasetBuild build_dataset(const EmbeddingTable& table, const std::vector<std::string>& words) {
    std::vector<std::string> labels;
    std::vector<std::string> missing;
    std::unordered_set<std::string> seen;
    for (const auto& raw : words) {
        auto w = detail::lowercase(raw);
        if (!seen.insert(w).second) continue;
        if (table.contains(w))
            labels.push_back(std::move(w));
        else
            missing.push_back(std::move(w));
    }
    if (labels.empty())
        throw EmptyIntersection("none of the " + std::to_string(words.size()) +
                                " requested words is in the embedding table");
    Matrix points(static_cast<Index>(labels.size()), table.dim());
    for (std::size_t k = 0; k < labels.size(); ++k)
        points.row(static_cast<Index>(k)) = table.find(labels[k])->transpose();
    return DatasetBuild{Dataset(std::move(labels), std::move(points)), std::move(missing)};
}

}  // namespace fuzzyemb
