#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace arcqa::resolver {

/// One retrieved passage scored against one answer choice.
struct Evidence {
    std::string choice_label;
    std::uint32_t passage_doc_id = 0;
    double retrieval_score = 0.0;
    double entail_prob = 0.0;  // [0, 1]

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct ChoiceScore {
    std::string label;
    double score = 0.0;

    friend bool operator==(const ChoiceScore&, const ChoiceScore&) = default;
};

struct DecisionOutcome {
    std::vector<std::string> selected;    // argmax set, in label order; never empty
    std::vector<ChoiceScore> per_choice;  // one per label, in label order

    [[nodiscard]] double score(std::string_view label) const;
    friend bool operator==(const DecisionOutcome&, const DecisionOutcome&) = default;
};

/// Pools every query's passages, keeps the top j by (retrieval score desc,
/// doc id asc, label asc) and scores each choice by its best entailment among
/// the kept rows. Choices with no kept row score 0.
DecisionOutcome ai2_rule(const std::vector<Evidence>& evidence,
                         const std::vector<std::string>& all_labels, std::size_t j = 8);

/// Keeps each choice's own top k passages by (retrieval score desc, doc id
/// asc) and scores the choice by the best entailment among them.
DecisionOutcome maxentail_topk(const std::vector<Evidence>& evidence,
                               const std::vector<std::string>& all_labels, std::size_t k);

/// Builds an outcome from per-label scores: selected = every label tied at
/// the maximum.
DecisionOutcome outcome_from_scores(std::vector<ChoiceScore> scores);

struct ExamScore {
    double accuracy = 0.0;
    std::map<std::string, double> credit;  // per question id
};

/// Tie credit: 1/|selected| when the gold label is selected, else 0.
/// Throws InvalidArgument listing gold ids without an outcome.
ExamScore score_exam(const std::map<std::string, DecisionOutcome>& outcomes,
                     const std::map<std::string, std::string>& gold);

}  // namespace arcqa::resolver
