#include <fstream>
#include <sstream>

#include "doctest.h"

#include "arcqa/error.hpp"
#include "arcqa/pipeline/pipeline.hpp"
#include "support/paths.hpp"

using namespace arcqa;
using namespace arcqa::pipeline;

namespace {

struct PlantedRun {
    std::filesystem::path dir;
    PipelineConfig config;

    PlantedRun() : dir(testing::scratch_dir("pipeline")) {
        index::save_index(index::build_index(index::read_corpus(testing::fixture("planted_corpus.txt")), {}),
                          dir / "index");
        config.index_path = dir / "index";
        config.rule = Rule::maxentail;
        config.depth = 1;
    }
    ~PlantedRun() { std::filesystem::remove_all(dir); }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing and validation") {
    CHECK(parse_rule("ai2") == Rule::ai2);
    CHECK(parse_scorer("mlstm") == ScorerKind::mlstm);
    CHECK_THROWS_AS(parse_rule("best"), ConfigError);
    CHECK_THROWS_AS(parse_scorer("bert"), ConfigError);

    PlantedRun run;
    auto cfg = run.config;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.k_retrieve() == 2);
    cfg.depth = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = run.config;
    cfg.index_path = run.dir / "nope";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = run.config;
    cfg.scorer = ScorerKind::mlstm;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = run.config;
    cfg.passages_per_query = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("planted exam is answered perfectly") {
    PlantedRun run;
    const auto comps = Components::load(run.config);
    const auto res = run_eval(testing::fixture("planted_questions.jsonl"), run.config, comps);
    CHECK(res.report.accuracy == 1.0);
    REQUIRE(res.traces.size() == 20);
    for (const auto& t : res.traces) {
        REQUIRE(t.outcome.selected.size() == 1);
        CHECK(t.outcome.score(t.outcome.selected[0]) == 1.0);
        for (const auto& r : t.retrieval) {
            CHECK(r.results.size() <= run.config.k_retrieve());
        }
        for (const auto& e : t.evidence) {
            bool found = false;
            for (const auto& r : t.retrieval) {
                for (const auto& hit : r.results) {
                    found = found || (r.label == e.choice_label && hit.doc_id == e.passage_doc_id &&
                                      hit.score == e.retrieval_score);
                }
            }
            CHECK(found);
        }
    }

    // Every gold key moved to another choice.
    auto questions = question::parse_questions(testing::fixture("planted_questions.jsonl"));
    std::map<std::string, resolver::DecisionOutcome> outcomes;
    std::map<std::string, std::string> wrong;
    for (std::size_t i = 0; i < questions.size(); ++i) {
        const auto labels = questions[i].labels();
        const auto at = std::find(labels.begin(), labels.end(), *questions[i].answer_key) - labels.begin();
        wrong[questions[i].id] = labels[(static_cast<std::size_t>(at) + 1) % labels.size()];
        outcomes[res.traces[i].question_id] = res.traces[i].outcome;
    }
    CHECK(resolver::score_exam(outcomes, wrong).accuracy == 0.0);

    auto split_cfg = run.config;
    split_cfg.split = true;
    const auto split = answer_all(questions, split_cfg, comps);
    for (std::size_t i = 0; i < questions.size(); ++i) {
        CHECK(split[i].outcome == res.traces[i].outcome);
    }
}

TEST_CASE("queries that match nothing tie every choice at 0") {
    const auto dir = testing::scratch_dir("noise");
    const std::vector<std::string> docs = {"zzz yyy", "xxx"};
    index::save_index(index::build_index(docs, {}), dir / "index");
    PipelineConfig cfg;
    cfg.index_path = dir / "index";
    const auto comps = Components::load(cfg);
    const auto q = question::parse_questions(testing::fixture("planted_questions.jsonl")).front();
    const auto t = answer_question(q, cfg, comps);
    CHECK(t.no_evidence);
    CHECK(t.outcome.selected == q.labels());
    for (const auto& l : q.labels()) {
        CHECK(t.outcome.score(l) == 0.0);
    }
    cfg.rule = Rule::ai2;
    CHECK(answer_question(q, cfg, comps).outcome.selected == q.labels());
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache, parallelism and reruns leave outputs unchanged") {
    PlantedRun run;
    run.config.rule = Rule::ai2;
    run.config.depth = 3;
    const auto questions = question::parse_questions(testing::fixture("planted_questions.jsonl"));
    const auto plain = Components::load(run.config);
    const auto serial = predictions_jsonl(answer_all_serial(questions, run.config, plain));
    CHECK(predictions_jsonl(answer_all(questions, run.config, plain)) == serial);

    auto cached_cfg = run.config;
    cached_cfg.cache_dir = run.dir / "cache";
    const auto cached = Components::load(cached_cfg);
    CHECK(predictions_jsonl(answer_all(questions, cached_cfg, cached)) == serial);
    CHECK(cached.cache->misses() > 0);
    CHECK(cached.cache->hits() == 0);
    CHECK(predictions_jsonl(answer_all(questions, cached_cfg, cached)) == serial);
    CHECK(cached.cache->hits() == cached.cache->misses());

    // Garble every entry: each is recomputed, reported and overwritten.
    std::size_t garbled = 0;
    for (const auto& e : std::filesystem::directory_iterator(run.dir / "cache")) {
        std::ofstream(e.path(), std::ios::trunc) << "garbage\n";
        ++garbled;
    }
    const auto again = Components::load(cached_cfg);
    CHECK(predictions_jsonl(answer_all_serial(questions, cached_cfg, again)) == serial);
    CHECK(again.cache->corrupt() == garbled);
    const auto healed = Components::load(cached_cfg);
    CHECK(predictions_jsonl(answer_all_serial(questions, cached_cfg, healed)) == serial);
    CHECK(healed.cache->corrupt() == 0);

    auto r1 = run_eval(testing::fixture("planted_questions.jsonl"), run.config, plain).report.to_json();
    auto r2 = run_eval(testing::fixture("planted_questions.jsonl"), run.config, plain).report.to_json();
    r1.erase("timing");
    r2.erase("timing");
    CHECK(r1.dump() == r2.dump());
}

TEST_CASE("predictions round-trip") {
    PlantedRun run;
    const auto comps = Components::load(run.config);
    const auto traces =
        answer_all(question::parse_questions(testing::fixture("planted_questions.jsonl")), run.config, comps);
    write_predictions(run.dir / "pred.jsonl", traces);
    CHECK(slurp(run.dir / "pred.jsonl") == predictions_jsonl(traces));
    const auto back = read_predictions(run.dir / "pred.jsonl");
    REQUIRE(back.size() == traces.size());
    for (const auto& t : traces) {
        CHECK(back.at(t.question_id) == t.outcome);
    }
    write_traces(run.dir / "trace.jsonl", traces);
    CHECK(std::filesystem::file_size(run.dir / "trace.jsonl") > 0);

    {
        std::ofstream out(run.dir / "bad.jsonl");
        out << R"({"id":"x","selected":[]})" << "\n";
    }
    CHECK_THROWS_AS(read_predictions(run.dir / "bad.jsonl"), ParseError);
}

TEST_CASE("run_eval needs answer keys") {
    PlantedRun run;
    {
        std::ofstream out(run.dir / "nokey.jsonl");
        out << R"({"id":"x","question":{"stem":"Which gas?","choices":[{"label":"A","text":"a"},{"label":"B","text":"b"}]}})"
            << "\n";
    }
    CHECK_THROWS_AS(run_eval(run.dir / "nokey.jsonl", run.config, Components::load(run.config)), ParseError);
}
