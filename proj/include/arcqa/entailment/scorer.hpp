#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "arcqa/entailment/match_lstm.hpp"

namespace arcqa::entailment {

/// Fraction of the hypothesis's distinct content tokens (stopwords removed)
/// that also occur in the premise. 0 when the hypothesis has no content token.
double lexical_entail(std::string_view premise, std::string_view hypothesis);

bool is_stopword(std::string_view norm_token);

/// P(entails) for one premise/hypothesis pair. Implementations are immutable
/// and safe to call concurrently.
class EntailmentScorer {
public:
    virtual ~EntailmentScorer() = default;
    [[nodiscard]] virtual double score(std::string_view premise, std::string_view hypothesis) const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
};

class LexicalScorer final : public EntailmentScorer {
public:
    [[nodiscard]] double score(std::string_view premise, std::string_view hypothesis) const override;
    [[nodiscard]] std::string name() const override { return "lexical"; }
};

class MatchLstmScorer final : public EntailmentScorer {
public:
    explicit MatchLstmScorer(MatchLstmModel model) : model_(std::move(model)) {}
    /// Texts that tokenize to nothing score 0.
    [[nodiscard]] double score(std::string_view premise, std::string_view hypothesis) const override;
    [[nodiscard]] std::string name() const override { return "mlstm"; }
    [[nodiscard]] const MatchLstmModel& model() const { return model_; }

private:
    MatchLstmModel model_;
};

/// Prepends context_prefix (when non-empty) to the premise, then scores.
double score_evidence(const EntailmentScorer& scorer, std::string_view premise_text,
                      std::string_view context_prefix, std::string_view hypothesis);

}  // namespace arcqa::entailment
