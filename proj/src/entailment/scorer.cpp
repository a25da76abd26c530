#include "arcqa/entailment/scorer.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "arcqa/text/tokenize.hpp"

namespace arcqa::entailment {

namespace {

constexpr std::string_view kStopwords[] = {
    "a",     "about", "all",   "also",  "an",   "and",   "are",   "as",    "at",    "be",
    "been",  "but",   "by",    "can",   "did",  "do",    "does",  "for",   "from",  "has",
    "have",  "in",    "into",  "is",    "it",   "its",   "most",  "of",    "on",    "or",
    "some",  "such",  "than",  "that",  "the",  "their", "them",  "these", "they",  "this",
    "those", "to",    "was",   "were",  "will", "with",  "would", "which"};

}  // namespace

bool is_stopword(std::string_view norm_token) {
    static const std::set<std::string_view> words(std::begin(kStopwords), std::end(kStopwords));
    return words.count(norm_token) > 0;
}

double lexical_entail(std::string_view premise, std::string_view hypothesis) {
    std::set<std::string> hyp;
    for (auto& t : text::normalize(hypothesis)) {
        if (!is_stopword(t)) {
            hyp.insert(std::move(t));
        }
    }
    if (hyp.empty()) {
        return 0.0;
    }
    std::set<std::string> prem;
    for (auto& t : text::normalize(premise)) {
        prem.insert(std::move(t));
    }
    const auto shared = std::count_if(hyp.begin(), hyp.end(),
                                      [&](const std::string& t) { return prem.count(t) > 0; });
    return static_cast<double>(shared) / static_cast<double>(hyp.size());
}

double LexicalScorer::score(std::string_view premise, std::string_view hypothesis) const {
    return lexical_entail(premise, hypothesis);
}

double MatchLstmScorer::score(std::string_view premise, std::string_view hypothesis) const {
    const auto p = text::normalize(premise);
    const auto h = text::normalize(hypothesis);
    if (p.empty() || h.empty()) {
        return 0.0;
    }
    return model_.p_entails(p, h);
}

double score_evidence(const EntailmentScorer& scorer, std::string_view premise_text,
                      std::string_view context_prefix, std::string_view hypothesis) {
    if (context_prefix.empty()) {
        return scorer.score(premise_text, hypothesis);
    }
    std::string premise(context_prefix);
    premise += ' ';
    premise.append(premise_text);
    return scorer.score(premise, hypothesis);
}

}  // namespace arcqa::entailment
