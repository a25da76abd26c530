#include "arcqa/pipeline/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "arcqa/error.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::pipeline {

using nlohmann::json;

Rule parse_rule(const std::string& s) {
    if (s == "ai2") {
        return Rule::ai2;
    }
    if (s == "maxentail") {
        return Rule::maxentail;
    }
    throw ConfigError("unknown decision rule '" + s + "' (expected ai2 or maxentail)");
}

ScorerKind parse_scorer(const std::string& s) {
    if (s == "lexical") {
        return ScorerKind::lexical;
    }
    if (s == "mlstm") {
        return ScorerKind::mlstm;
    }
    throw ConfigError("unknown scorer '" + s + "' (expected lexical or mlstm)");
}

std::string to_string(Rule r) {
    return r == Rule::ai2 ? "ai2" : "maxentail";
}

std::string to_string(ScorerKind s) {
    return s == ScorerKind::lexical ? "lexical" : "mlstm";
}

void PipelineConfig::validate() const {
    if (depth < 1) {
        throw ConfigError("decision-rule depth (j/k) must be >= 1");
    }
    if (passages_per_query && *passages_per_query < 1) {
        throw ConfigError("passages per query must be >= 1");
    }
    if (scorer == ScorerKind::mlstm && !entail_model_path) {
        throw ConfigError("scorer mlstm requires an entailment model path");
    }
    const auto require = [](const std::filesystem::path& p, const char* what) {
        if (!std::filesystem::exists(p)) {
            throw ConfigError(std::string(what) + " not found: " + p.string());
        }
    };
    require(index_path, "index");
    if (tagger_path) {
        require(*tagger_path, "tagger model");
    }
    if (scorer == ScorerKind::mlstm) {
        require(*entail_model_path, "entailment model");
    }
}

json PipelineConfig::to_json() const {
    json j;
    j["index"] = index_path.string();
    j["tagger"] = tagger_path ? json(tagger_path->string()) : json("passthrough");
    j["scorer"] = to_string(scorer);
    j["entail_model"] = entail_model_path ? json(entail_model_path->string()) : json(nullptr);
    j["rule"] = to_string(rule);
    j["depth"] = depth;
    j["split"] = split;
    j["k_retrieve"] = k_retrieve();
    j["cache"] = cache_dir.has_value();
    return j;
}

Components Components::load(const PipelineConfig& config) {
    config.validate();
    Components c;
    c.index = std::make_shared<const index::Index>(index::load_index(config.index_path));
    if (config.tagger_path) {
        c.tagger = std::make_shared<const rewriter::TaggerModel>(rewriter::TaggerModel::load(*config.tagger_path));
    }
    if (config.scorer == ScorerKind::mlstm) {
        c.scorer = std::make_shared<const entailment::MatchLstmScorer>(
            entailment::MatchLstmModel::load(*config.entail_model_path));
    } else {
        c.scorer = std::make_shared<const entailment::LexicalScorer>();
    }
    if (config.cache_dir) {
        c.cache = std::make_shared<const RetrievalCache>(*config.cache_dir, c.index->fingerprint());
    }
    return c;
}

QuestionTrace answer_question(const question::Question& q, const PipelineConfig& config,
                              const Components& components) {
    if (!components.index || !components.scorer) {
        throw ConfigError("answer_question: index and scorer must be loaded");
    }
    QuestionTrace trace;
    trace.question_id = q.id;
    trace.selected_terms = components.tagger ? rewriter::select_terms(*components.tagger, q.stem)
                                             : text::normalize(q.stem);
    const auto queries = question::build_queries(q, trace.selected_terms);
    trace.hypotheses = question::build_hypotheses(q, config.split);
    const auto depth = config.k_retrieve();

    for (std::size_t c = 0; c < q.choices.size(); ++c) {
        const auto& [label, query] = queries.per_choice_queries[c];
        ChoiceRetrieval r{label, query, {}};
        r.results = components.cache ? components.cache->search(*components.index, query, depth)
                                     : components.index->search(query, depth);
        const auto& hypothesis = trace.hypotheses.hypotheses[c].text;
        for (const auto& hit : r.results) {
            const double p = entailment::score_evidence(*components.scorer, components.index->doc_text(hit.doc_id),
                                                        trace.hypotheses.context_prefix, hypothesis);
            trace.evidence.push_back({label, hit.doc_id, hit.score, p});
        }
        trace.retrieval.push_back(std::move(r));
    }
    trace.no_evidence = trace.evidence.empty();
    const auto labels = q.labels();
    trace.outcome = config.rule == Rule::ai2 ? resolver::ai2_rule(trace.evidence, labels, config.depth)
                                             : resolver::maxentail_topk(trace.evidence, labels, config.depth);
    return trace;
}

std::vector<QuestionTrace> answer_all(const std::vector<question::Question>& questions,
                                      const PipelineConfig& config, const Components& components) {
    std::vector<QuestionTrace> traces(questions.size());
    std::vector<std::exception_ptr> errors(questions.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(questions.size()); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        try {
            traces[iu] = answer_question(questions[iu], config, components);
        } catch (...) {
            errors[iu] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return traces;
}

std::vector<QuestionTrace> answer_all_serial(const std::vector<question::Question>& questions,
                                             const PipelineConfig& config, const Components& components) {
    std::vector<QuestionTrace> traces;
    traces.reserve(questions.size());
    for (const auto& q : questions) {
        traces.push_back(answer_question(q, config, components));
    }
    return traces;
}

namespace {

json prediction_json(const QuestionTrace& t) {
    json scores = json::object();
    for (const auto& c : t.outcome.per_choice) {
        scores[c.label] = c.score;
    }
    return json{{"id", t.question_id}, {"selected", t.outcome.selected}, {"scores", scores}};
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

}  // namespace

json QuestionTrace::to_json() const {
    json retrieval_json = json::array();
    for (const auto& r : retrieval) {
        json hits = json::array();
        for (const auto& h : r.results) {
            hits.push_back({{"rank", h.rank}, {"doc_id", h.doc_id}, {"score", h.score}});
        }
        retrieval_json.push_back({{"label", r.label}, {"query", r.query}, {"results", hits}});
    }
    json hyps = json::object();
    for (const auto& h : hypotheses.hypotheses) {
        hyps[h.label] = h.text;
    }
    json ev = json::array();
    for (const auto& e : evidence) {
        ev.push_back({{"label", e.choice_label},
                      {"doc_id", e.passage_doc_id},
                      {"retrieval_score", e.retrieval_score},
                      {"entail_prob", e.entail_prob}});
    }
    json out = prediction_json(*this);
    out["selected_terms"] = selected_terms;
    out["retrieval"] = retrieval_json;
    out["hypotheses"] = hyps;
    out["context_prefix"] = hypotheses.context_prefix;
    out["evidence"] = ev;
    out["no_evidence"] = no_evidence;
    return out;
}

std::string predictions_jsonl(const std::vector<QuestionTrace>& traces) {
    std::string out;
    for (const auto& t : traces) {
        out += prediction_json(t).dump();
        out += '\n';
    }
    return out;
}

void write_predictions(const std::filesystem::path& path, const std::vector<QuestionTrace>& traces) {
    auto out = open_out(path);
    out << predictions_jsonl(traces);
}

void write_traces(const std::filesystem::path& path, const std::vector<QuestionTrace>& traces) {
    auto out = open_out(path);
    for (const auto& t : traces) {
        out << t.to_json().dump() << '\n';
    }
}

std::map<std::string, resolver::DecisionOutcome> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open predictions " + path.string());
    }
    std::map<std::string, resolver::DecisionOutcome> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
        try {
            const auto j = json::parse(line);
            resolver::DecisionOutcome o;
            o.selected = j.at("selected").get<std::vector<std::string>>();
            if (o.selected.empty()) {
                throw ParseError("'selected' must be non-empty");
            }
            if (j.contains("scores")) {
                for (const auto& [label, score] : j.at("scores").items()) {
                    o.per_choice.push_back({label, score.get<double>()});
                }
            }
            out[j.at("id").get<std::string>()] = std::move(o);
        } catch (const json::exception& e) {
            throw ParseError(where + e.what());
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        }
    }
    return out;
}

std::map<std::string, std::string> gold_labels(const std::vector<question::Question>& questions) {
    std::map<std::string, std::string> gold;
    for (const auto& q : questions) {
        if (q.answer_key) {
            gold[q.id] = *q.answer_key;
        }
    }
    return gold;
}

json EvalReport::to_json() const {
    json j;
    j["accuracy"] = accuracy;
    j["questions"] = credits.size();
    j["credits"] = credits;
    j["config"] = config;
    j["timing"] = {{"seconds", seconds}};
    return j;
}

EvalRun run_eval(const std::filesystem::path& questions_file, const PipelineConfig& config,
                 const Components& components) {
    const auto start = std::chrono::steady_clock::now();
    const auto questions = question::parse_questions(questions_file);
    for (const auto& q : questions) {
        if (!q.answer_key) {
            throw ParseError(questions_file.string() + ": question " + q.id + " has no answerKey");
        }
    }
    EvalRun run;
    run.traces = answer_all(questions, config, components);
    std::map<std::string, resolver::DecisionOutcome> outcomes;
    for (const auto& t : run.traces) {
        outcomes[t.question_id] = t.outcome;
    }
    const auto exam = resolver::score_exam(outcomes, gold_labels(questions));
    run.report.accuracy = exam.accuracy;
    run.report.credits = exam.credit;
    run.report.config = config.to_json();
    run.report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace arcqa::pipeline
