#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace arcqa::rewriter {

/// Surface forms (1-3 normalized tokens joined by a single space) mapped to
/// knowledge-graph entity ids.
class KgLexicon {
public:
    static constexpr std::size_t kMaxPhraseTokens = 3;

    /// Normalizes surface with the corpus tokenizer. Forms that normalize to
    /// zero or more than three tokens are rejected with InvalidArgument.
    void add(const std::string& surface, std::string entity_id);

    /// Reads `surface<TAB>entity_id` lines. Over-long phrases are a parse error.
    static KgLexicon load_tsv(const std::filesystem::path& path);

    [[nodiscard]] const std::string* find(const std::string& phrase) const;
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

    friend bool operator==(const KgLexicon&, const KgLexicon&) = default;

private:
    std::map<std::string, std::string> entries_;
};

struct LinkSpan {
    std::size_t start = 0;  // inclusive token index
    std::size_t end = 0;    // exclusive
    std::string entity_id;

    friend bool operator==(const LinkSpan&, const LinkSpan&) = default;
};

/// Greedy left-to-right longest match: at each position try 3, 2, then 1
/// tokens; on a hit, continue after the span. Spans never overlap.
std::vector<LinkSpan> link_entities(const std::vector<std::string>& tokens, const KgLexicon& lexicon);

}  // namespace arcqa::rewriter
