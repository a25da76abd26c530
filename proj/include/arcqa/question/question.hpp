#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arcqa::question {

struct Choice {
    std::string label;
    std::string text;

    friend bool operator==(const Choice&, const Choice&) = default;
};

/// One multiple-choice exam item.
struct Question {
    std::string id;
    std::string stem;
    std::vector<Choice> choices;
    std::optional<std::string> answer_key;

    /// 2-5 choices, unique labels, answer key (if any) names a choice.
    /// Throws ParseError naming the violated rule.
    void validate() const;
    [[nodiscard]] std::vector<std::string> labels() const;

    friend bool operator==(const Question&, const Question&) = default;
};

/// Parses one ARC JSON object (`id`, `question.stem`, `question.choices`,
/// optional `answerKey`).
Question parse_question(std::string_view json_line);

/// JSON-lines reader; blank lines are skipped and errors carry file:line.
std::vector<Question> parse_questions(const std::filesystem::path& path);

struct SplitStem {
    std::string context;         // earlier sentences verbatim, "" for one sentence
    std::string final_sentence;

    friend bool operator==(const SplitStem&, const SplitStem&) = default;
};

/// Sentence boundaries are '.', '?' or '!' followed by whitespace.
/// Abbreviations such as "e.g. " split too.
SplitStem split_question(std::string_view stem);

/// Fill-in-the-blank rewrite, first matching rule wins:
///   1. every run of 3+ underscores is replaced by the choice text;
///   2. the leftmost wh-word (what, which, who, whom, whose, where, when, why,
///      how; any case) is replaced by the choice text;
///   3. the choice text is appended.
/// A trailing '?' is removed in every case.
std::string make_hypothesis(std::string_view sentence, std::string_view choice_text);

struct LabeledText {
    std::string label;
    std::string text;

    friend bool operator==(const LabeledText&, const LabeledText&) = default;
};

struct HypothesisSet {
    std::vector<LabeledText> hypotheses;  // in choice order
    std::string context_prefix;           // "" unless split mode

    [[nodiscard]] const std::string& hypothesis(std::string_view label) const;
    friend bool operator==(const HypothesisSet&, const HypothesisSet&) = default;
};

/// split=true forms hypotheses from the final sentence only and returns the
/// earlier sentences as a prefix for every premise.
HypothesisSet build_hypotheses(const Question& q, bool split);

struct QueryBundle {
    std::string question_id;
    std::vector<std::string> selected_terms;
    std::vector<LabeledText> per_choice_queries;  // in choice order

    friend bool operator==(const QueryBundle&, const QueryBundle&) = default;
};

/// Each query is the selected terms (duplicates kept) followed by the choice text.
QueryBundle build_queries(const Question& q, const std::vector<std::string>& selected_terms);

}  // namespace arcqa::question
