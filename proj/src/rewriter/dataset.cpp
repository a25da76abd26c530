#include "arcqa/rewriter/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "arcqa/error.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::rewriter {

namespace {

std::vector<std::string> split_on(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

std::string lower(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return s;
}

int parse_rating(const std::string& s, const std::string& where) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(where + ": rating '" + s + "' is not an integer");
    }
    return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace

std::vector<int> binarize_ratings(const std::vector<int>& ratings, int threshold) {
    std::vector<int> labels;
    labels.reserve(ratings.size());
    for (int r : ratings) {
        if (r < 1 || r > 5) {
            throw ParseError("rating " + std::to_string(r) + " outside 1..5");
        }
        labels.push_back(r >= threshold ? 1 : 0);
    }
    return labels;
}

std::vector<EssentialTermsExample> read_essential_terms(const std::filesystem::path& path,
                                                        int threshold) {
    std::vector<EssentialTermsExample> data;
    const auto lines = read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto& line = lines[n];
        if (line.empty()) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(n + 1);
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(where + ": expected tokens<TAB>ratings");
        }
        EssentialTermsExample ex;
        for (auto& tok : split_on(line.substr(0, tab), " ")) {
            ex.tokens.push_back(lower(std::move(tok)));
        }
        for (const auto& r : split_on(line.substr(tab + 1), " ")) {
            ex.ratings.push_back(parse_rating(r, where));
        }
        if (ex.tokens.empty() || ex.tokens.size() != ex.ratings.size()) {
            throw ParseError(where + ": " + std::to_string(ex.tokens.size()) + " tokens but " +
                             std::to_string(ex.ratings.size()) + " ratings");
        }
        try {
            ex.labels = binarize_ratings(ex.ratings, threshold);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        data.push_back(std::move(ex));
    }
    return data;
}

void write_essential_terms(const std::filesystem::path& path,
                           const std::vector<EssentialTermsExample>& data) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    for (const auto& ex : data) {
        out << text::join(ex.tokens) << '\t';
        for (std::size_t i = 0; i < ex.ratings.size(); ++i) {
            out << (i > 0 ? " " : "") << ex.ratings[i];
        }
        out << '\n';
    }
}

std::vector<EssentialTermsExample> convert_pipe_annotated(const std::filesystem::path& path,
                                                          int threshold) {
    std::vector<EssentialTermsExample> data;
    const auto lines = read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        if (lines[n].empty()) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(n + 1);
        EssentialTermsExample ex;
        for (const auto& item : split_on(lines[n], " ,\t")) {
            const auto bar = item.rfind('|');
            if (bar == std::string::npos || bar == 0) {
                throw ParseError(where + ": expected word|rating, got '" + item + "'");
            }
            ex.tokens.push_back(lower(item.substr(0, bar)));
            ex.ratings.push_back(parse_rating(item.substr(bar + 1), where));
        }
        try {
            ex.labels = binarize_ratings(ex.ratings, threshold);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
        data.push_back(std::move(ex));
    }
    return data;
}

DatasetSplit split_dataset(std::vector<EssentialTermsExample> data,
                           const std::vector<std::string>& excluded_stems, std::uint64_t seed) {
    std::unordered_set<std::string> excluded;
    for (const auto& stem : excluded_stems) {
        excluded.insert(text::join(text::normalize(stem)));
    }
    DatasetSplit split;
    std::vector<EssentialTermsExample> kept;
    for (auto& ex : data) {
        if (excluded.count(text::join(text::normalize(text::join(ex.tokens)))) > 0) {
            ++split.removed_overlap;
        } else {
            kept.push_back(std::move(ex));
        }
    }
    std::mt19937_64 rng(seed);
    std::shuffle(kept.begin(), kept.end(), rng);
    const std::size_t n = kept.size();
    const std::size_t n_dev = n / 10;
    const std::size_t n_test = n / 10;
    const std::size_t n_train = n - n_dev - n_test;
    auto it = kept.begin();
    split.train.assign(std::make_move_iterator(it), std::make_move_iterator(it + static_cast<std::ptrdiff_t>(n_train)));
    it += static_cast<std::ptrdiff_t>(n_train);
    split.dev.assign(std::make_move_iterator(it), std::make_move_iterator(it + static_cast<std::ptrdiff_t>(n_dev)));
    it += static_cast<std::ptrdiff_t>(n_dev);
    split.test.assign(std::make_move_iterator(it), std::make_move_iterator(kept.end()));
    return split;
}

}  // namespace arcqa::rewriter
