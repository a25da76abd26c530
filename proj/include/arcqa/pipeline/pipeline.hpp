#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "arcqa/entailment/scorer.hpp"
#include "arcqa/index/inverted_index.hpp"
#include "arcqa/pipeline/cache.hpp"
#include "arcqa/question/question.hpp"
#include "arcqa/resolver/rules.hpp"
#include "arcqa/rewriter/tagger.hpp"

namespace arcqa::pipeline {

enum class Rule { ai2, maxentail };
enum class ScorerKind { lexical, mlstm };

Rule parse_rule(const std::string& s);
ScorerKind parse_scorer(const std::string& s);
std::string to_string(Rule r);
std::string to_string(ScorerKind s);

struct PipelineConfig {
    std::filesystem::path index_path;
    std::optional<std::filesystem::path> tagger_path;  // nullopt: keep every stem token
    ScorerKind scorer = ScorerKind::lexical;
    std::optional<std::filesystem::path> entail_model_path;
    Rule rule = Rule::maxentail;
    std::size_t depth = 8;  // j for ai2, k for maxentail
    bool split = false;
    std::optional<std::size_t> passages_per_query;  // default 2 * depth
    std::optional<std::filesystem::path> cache_dir;

    [[nodiscard]] std::size_t k_retrieve() const { return passages_per_query.value_or(2 * depth); }
    /// Throws ConfigError for bad parameters or missing artifacts.
    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Loaded, immutable artifacts shared by every question.
struct Components {
    std::shared_ptr<const index::Index> index;
    std::shared_ptr<const rewriter::TaggerModel> tagger;  // null for passthrough
    std::shared_ptr<const entailment::EntailmentScorer> scorer;
    std::shared_ptr<const RetrievalCache> cache;           // optional

    static Components load(const PipelineConfig& config);
};

struct ChoiceRetrieval {
    std::string label;
    std::string query;
    std::vector<index::RetrievalResult> results;
};

/// Everything computed for one question, in pipeline order.
struct QuestionTrace {
    std::string question_id;
    std::vector<std::string> selected_terms;
    std::vector<ChoiceRetrieval> retrieval;
    question::HypothesisSet hypotheses;
    std::vector<resolver::Evidence> evidence;
    resolver::DecisionOutcome outcome;
    bool no_evidence = false;  // no query retrieved anything

    [[nodiscard]] nlohmann::json to_json() const;
};

QuestionTrace answer_question(const question::Question& q, const PipelineConfig& config,
                              const Components& components);

/// Questions are answered concurrently under OpenMP; output order follows input.
std::vector<QuestionTrace> answer_all(const std::vector<question::Question>& questions,
                                      const PipelineConfig& config, const Components& components);
/// Single-threaded reference for answer_all.
std::vector<QuestionTrace> answer_all_serial(const std::vector<question::Question>& questions,
                                             const PipelineConfig& config, const Components& components);

/// JSON-lines `{id, selected: [...], scores: {label: real}}`, input order.
void write_predictions(const std::filesystem::path& path, const std::vector<QuestionTrace>& traces);
std::string predictions_jsonl(const std::vector<QuestionTrace>& traces);
std::map<std::string, resolver::DecisionOutcome> read_predictions(const std::filesystem::path& path);

void write_traces(const std::filesystem::path& path, const std::vector<QuestionTrace>& traces);

/// Gold labels of every question that has an answer key.
std::map<std::string, std::string> gold_labels(const std::vector<question::Question>& questions);

struct EvalReport {
    double accuracy = 0.0;
    std::map<std::string, double> credits;
    double seconds = 0.0;
    nlohmann::json config;

    /// Keys in fixed order; "timing" is the only run-dependent field.
    [[nodiscard]] nlohmann::json to_json() const;
};

struct EvalRun {
    EvalReport report;
    std::vector<QuestionTrace> traces;
};

/// Answers every question in the file and scores against its answer keys.
/// All questions must carry a key.
EvalRun run_eval(const std::filesystem::path& questions_file, const PipelineConfig& config,
                 const Components& components);

}  // namespace arcqa::pipeline
