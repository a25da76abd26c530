// arcqa command-line front end.
// Exit status: 0 success, 1 usage or configuration error, 2 data error.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "arcqa/entailment/scorer.hpp"
#include "arcqa/error.hpp"
#include "arcqa/index/inverted_index.hpp"
#include "arcqa/pipeline/pipeline.hpp"
#include "arcqa/rewriter/tagger.hpp"
#include "arcqa/text/tokenize.hpp"

using namespace arcqa;
using nlohmann::json;

namespace {

json metrics_json(const rewriter::TokenMetrics& m) {
    return {{"tp", m.tp},           {"fp", m.fp},         {"fn", m.fn},     {"tn", m.tn},
            {"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

std::optional<rewriter::KgResources> load_kg(const std::string& lexicon, const std::string& embeddings) {
    if (lexicon.empty() && embeddings.empty()) {
        return std::nullopt;
    }
    if (lexicon.empty() || embeddings.empty()) {
        throw ConfigError("--kg-lexicon and --kg-embeddings must be given together");
    }
    return rewriter::KgResources{rewriter::KgLexicon::load_tsv(lexicon), nn::EmbeddingTable::load_text(embeddings)};
}

std::vector<std::string> stems_of(const std::vector<std::string>& files) {
    std::vector<std::string> stems;
    for (const auto& f : files) {
        for (const auto& q : question::parse_questions(f)) {
            stems.push_back(q.stem);
        }
    }
    return stems;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple-choice science question answering: rewrite, retrieve, entail, decide."};
    app.require_subcommand(1);

    // index
    auto* idx = app.add_subcommand("index", "Build or query a BM25 sentence index");
    idx->require_subcommand(1);
    std::string corpus, index_dir, query;
    double k1 = 1.2, b = 0.75;
    std::size_t shards = 0, k = 10;
    auto* idx_build = idx->add_subcommand("build", "Index a corpus with one sentence per line");
    idx_build->add_option("--corpus", corpus, "Sentence file")->required()->check(CLI::ExistingFile);
    idx_build->add_option("--out", index_dir, "Output directory")->required();
    idx_build->add_option("--k1", k1, "BM25 k1");
    idx_build->add_option("--b", b, "BM25 b");
    idx_build->add_option("--shards", shards, "Build shards (0 = one per thread)");
    auto* idx_search = idx->add_subcommand("search", "Print the top k sentences for a query");
    idx_search->add_option("--index", index_dir, "Index directory")->required();
    idx_search->add_option("--query", query, "Query text")->required();
    idx_search->add_option("--k", k, "Result count");

    // rewriter
    auto* rw = app.add_subcommand("rewriter", "Essential-term tagger");
    rw->require_subcommand(1);
    std::string data_in, data_out, dev_file, embeddings, kg_lexicon, kg_embeddings, model_path, text_in;
    std::vector<std::string> exclude;
    std::uint64_t seed = 1;
    int epochs = 50, threshold = 3;
    double lr = 0.015, lr_decay = 0.05;
    Eigen::Index hidden = 200, link_dim = 10;
    auto* rw_convert = rw->add_subcommand("convert", "Convert word|rating lines to the tab-separated format");
    rw_convert->add_option("--in", data_in, "Annotated file")->required()->check(CLI::ExistingFile);
    rw_convert->add_option("--out", data_out, "Output file")->required();
    auto* rw_split = rw->add_subcommand("split", "Drop exam-overlapping questions and split train/dev/test");
    rw_split->add_option("--in", data_in, "Dataset file")->required()->check(CLI::ExistingFile);
    rw_split->add_option("--out-dir", data_out, "Directory for train.tsv, dev.tsv, test.tsv")->required();
    rw_split->add_option("--exclude", exclude, "Question files whose stems must not appear");
    rw_split->add_option("--seed", seed, "Shuffle seed");
    auto* rw_train = rw->add_subcommand("train", "Train a tagger");
    rw_train->add_option("--train", data_in, "Training set")->required()->check(CLI::ExistingFile);
    rw_train->add_option("--dev", dev_file, "Dev set for snapshot selection")->check(CLI::ExistingFile);
    rw_train->add_option("--embeddings", embeddings, "Word vectors (text format)")->required()->check(CLI::ExistingFile);
    rw_train->add_option("--kg-lexicon", kg_lexicon, "surface<TAB>entity lexicon")->check(CLI::ExistingFile);
    rw_train->add_option("--kg-embeddings", kg_embeddings, "Entity vectors")->check(CLI::ExistingFile);
    rw_train->add_option("--out", model_path, "Model file")->required();
    rw_train->add_option("--seed", seed, "Seed");
    rw_train->add_option("--epochs", epochs, "Epochs");
    rw_train->add_option("--lr", lr, "Initial learning rate");
    rw_train->add_option("--lr-decay", lr_decay, "Learning-rate decay per epoch");
    rw_train->add_option("--hidden", hidden, "BiLSTM width per direction");
    rw_train->add_option("--link-dim", link_dim, "Entity-link feature width");
    for (auto* c : {rw_convert, rw_split, rw_train}) {
        c->add_option("--threshold", threshold, "Ratings at or above this are essential");
    }
    auto* rw_eval = rw->add_subcommand("eval", "Token metrics on a labeled set");
    rw_eval->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    rw_eval->add_option("--data", data_in, "Labeled set")->required()->check(CLI::ExistingFile);
    rw_eval->add_option("--threshold", threshold, "Ratings at or above this are essential");
    auto* rw_tag = rw->add_subcommand("tag", "Print the essential terms of a question");
    rw_tag->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    rw_tag->add_option("--text", text_in, "Question stem")->required();

    // entail
    auto* en = app.add_subcommand("entail", "Entailment scorers");
    en->require_subcommand(1);
    Eigen::Index ent_hidden = 8, matcher = 8;
    double ent_lr = 0.01, clip = 5.0;
    int ent_epochs = 200;
    std::string scorer_name = "lexical", premise, hypothesis;
    auto* en_train = en->add_subcommand("train", "Train a match-LSTM");
    en_train->add_option("--data", data_in, "Labeled pairs (JSON lines)")->required()->check(CLI::ExistingFile);
    en_train->add_option("--embeddings", embeddings, "Word vectors")->required()->check(CLI::ExistingFile);
    en_train->add_option("--out", model_path, "Model file")->required();
    en_train->add_option("--hidden", ent_hidden, "Encoder width per direction");
    en_train->add_option("--matcher", matcher, "Matcher width");
    en_train->add_option("--epochs", ent_epochs, "Epochs");
    en_train->add_option("--lr", ent_lr, "Learning rate");
    en_train->add_option("--clip", clip, "Gradient norm clip");
    en_train->add_option("--seed", seed, "Seed");
    auto* en_eval = en->add_subcommand("eval", "Accuracy on labeled pairs");
    en_eval->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    en_eval->add_option("--data", data_in, "Labeled pairs")->required()->check(CLI::ExistingFile);
    auto* en_score = en->add_subcommand("score", "P(entails) for one pair");
    en_score->add_option("--scorer", scorer_name, "lexical or mlstm");
    en_score->add_option("--model", model_path, "match-LSTM model")->check(CLI::ExistingFile);
    en_score->add_option("--premise", premise, "Premise text")->required();
    en_score->add_option("--hypothesis", hypothesis, "Hypothesis text")->required();

    // answer
    auto* ans = app.add_subcommand("answer", "Answer a question file");
    std::string questions, tagger, entail_model, rule = "maxentail", cache_dir, out, report;
    std::size_t depth = 8, per_query = 0;
    bool passthrough = false, split = false, trace = false;
    ans->add_option("--questions", questions, "Questions (JSON lines)")->required()->check(CLI::ExistingFile);
    ans->add_option("--index", index_dir, "Index directory")->required();
    auto* tag_opt = ans->add_option("--tagger", tagger, "Tagger model");
    ans->add_flag("--passthrough", passthrough, "Query with every stem token")->excludes(tag_opt);
    ans->add_option("--scorer", scorer_name, "lexical or mlstm");
    ans->add_option("--entail-model", entail_model, "match-LSTM model for --scorer mlstm");
    ans->add_option("--rule", rule, "ai2 or maxentail");
    ans->add_option("--k", depth, "j for ai2, k for maxentail");
    ans->add_option("--passages-per-query", per_query, "Retrieval depth per query (default 2k)");
    ans->add_flag("--split", split, "Hypothesis from the final sentence only");
    ans->add_flag("--trace", trace, "Also write <out>.trace.jsonl");
    ans->add_option("--cache-dir", cache_dir, "Retrieval cache directory");
    ans->add_option("--report", report, "Write an evaluation report (needs answer keys)");
    ans->add_option("--out", out, "Predictions file")->required();

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score predictions against answer keys");
    std::string predictions, gold;
    ev->add_option("--predictions", predictions, "Predictions file")->required()->check(CLI::ExistingFile);
    ev->add_option("--gold", gold, "Questions with answerKey")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*idx_build) {
            const index::Bm25Params params{k1, b};
            params.validate();
            index::BuildReport rep;
            const auto built = index::build_index(index::read_corpus(corpus), params, {shards}, &rep);
            index::save_index(built, index_dir);
            std::cerr << "indexed " << rep.indexed << " sentences, skipped " << rep.skipped_empty << " empty, "
                      << built.vocabulary_size() << " terms\n";
        } else if (*idx_search) {
            const auto loaded = index::load_index(index_dir);
            for (const auto& r : loaded.search(query, k)) {
                std::printf("%zu\t%.6f\t%u\t%s\n", r.rank, r.score, r.doc_id, loaded.doc_text(r.doc_id).c_str());
            }
        } else if (*rw_convert) {
            const auto data = rewriter::convert_pipe_annotated(data_in, threshold);
            rewriter::write_essential_terms(data_out, data);
            std::cerr << "converted " << data.size() << " questions\n";
        } else if (*rw_split) {
            const auto parts =
                rewriter::split_dataset(rewriter::read_essential_terms(data_in, threshold), stems_of(exclude), seed);
            std::filesystem::create_directories(data_out);
            rewriter::write_essential_terms(std::filesystem::path(data_out) / "train.tsv", parts.train);
            rewriter::write_essential_terms(std::filesystem::path(data_out) / "dev.tsv", parts.dev);
            rewriter::write_essential_terms(std::filesystem::path(data_out) / "test.tsv", parts.test);
            std::cerr << "train " << parts.train.size() << ", dev " << parts.dev.size() << ", test "
                      << parts.test.size() << ", removed " << parts.removed_overlap << " overlapping\n";
        } else if (*rw_train) {
            rewriter::TaggerConfig tc;
            tc.hidden = hidden;
            tc.link_dim = link_dim;
            tc.seed = seed;
            auto model = rewriter::TaggerModel::create(nn::EmbeddingTable::load_text(embeddings),
                                                       load_kg(kg_lexicon, kg_embeddings), tc);
            rewriter::TrainConfig cfg;
            cfg.epochs = epochs;
            cfg.lr0 = lr;
            cfg.lr_decay = lr_decay;
            cfg.seed = seed;
            const auto train = rewriter::read_essential_terms(data_in, threshold);
            std::optional<std::vector<rewriter::EssentialTermsExample>> dev;
            if (!dev_file.empty()) {
                dev = rewriter::read_essential_terms(dev_file, threshold);
            }
            rewriter::TrainHistory hist;
            const auto trained = rewriter::train_tagger(std::move(model), train, dev ? &*dev : nullptr, cfg, &hist);
            trained.save(model_path);
            for (std::size_t e = 0; e < hist.epoch_loss.size(); ++e) {
                std::cerr << "epoch " << e + 1 << " loss " << hist.epoch_loss[e];
                if (e < hist.dev_f1.size()) {
                    std::cerr << " dev_f1 " << hist.dev_f1[e];
                }
                std::cerr << "\n";
            }
            if (dev) {
                std::cerr << "kept epoch " << hist.best_epoch + 1 << "\n";
            }
        } else if (*rw_eval) {
            const auto model = rewriter::TaggerModel::load(model_path);
            std::cout << metrics_json(rewriter::eval_tagger(model, rewriter::read_essential_terms(data_in, threshold)))
                             .dump(2)
                      << "\n";
        } else if (*rw_tag) {
            const auto model = rewriter::TaggerModel::load(model_path);
            std::cout << text::join(rewriter::select_terms(model, text_in)) << "\n";
        } else if (*en_train) {
            entailment::MatchLstmConfig mc;
            mc.hidden = ent_hidden;
            mc.matcher = matcher;
            mc.seed = seed;
            entailment::EntailTrainConfig cfg;
            cfg.epochs = ent_epochs;
            cfg.lr = ent_lr;
            cfg.clip_norm = clip;
            cfg.seed = seed;
            const auto data = entailment::read_entailment_data(data_in);
            const auto model = entailment::train_entailment(
                entailment::MatchLstmModel::create(nn::EmbeddingTable::load_text(embeddings), mc), data, cfg);
            model.save(model_path);
            std::cerr << "training accuracy " << entailment::entailment_accuracy(model, data) << "\n";
        } else if (*en_eval) {
            const auto model = entailment::MatchLstmModel::load(model_path);
            std::cout << entailment::entailment_accuracy(model, entailment::read_entailment_data(data_in)) << "\n";
        } else if (*en_score) {
            const auto kind = pipeline::parse_scorer(scorer_name);
            std::unique_ptr<entailment::EntailmentScorer> scorer;
            if (kind == pipeline::ScorerKind::mlstm) {
                if (model_path.empty()) {
                    throw ConfigError("--scorer mlstm needs --model");
                }
                scorer = std::make_unique<entailment::MatchLstmScorer>(entailment::MatchLstmModel::load(model_path));
            } else {
                scorer = std::make_unique<entailment::LexicalScorer>();
            }
            std::printf("%.6f\n", scorer->score(premise, hypothesis));
        } else if (*ans) {
            pipeline::PipelineConfig cfg;
            cfg.index_path = index_dir;
            if (!passthrough && !tagger.empty()) {
                cfg.tagger_path = tagger;
            }
            cfg.scorer = pipeline::parse_scorer(scorer_name);
            if (!entail_model.empty()) {
                cfg.entail_model_path = entail_model;
            }
            cfg.rule = pipeline::parse_rule(rule);
            cfg.depth = depth;
            cfg.split = split;
            if (per_query > 0) {
                cfg.passages_per_query = per_query;
            }
            if (!cache_dir.empty()) {
                cfg.cache_dir = cache_dir;
            }
            const auto comps = pipeline::Components::load(cfg);
            std::vector<pipeline::QuestionTrace> traces;
            if (!report.empty()) {
                auto run = pipeline::run_eval(questions, cfg, comps);
                write_text(report, run.report.to_json().dump(2) + "\n");
                std::cerr << "accuracy " << run.report.accuracy << "\n";
                traces = std::move(run.traces);
            } else {
                traces = pipeline::answer_all(question::parse_questions(questions), cfg, comps);
            }
            pipeline::write_predictions(out, traces);
            if (trace) {
                pipeline::write_traces(out + ".trace.jsonl", traces);
            }
        } else if (*ev) {
            const auto score =
                resolver::score_exam(pipeline::read_predictions(predictions),
                                     pipeline::gold_labels(question::parse_questions(gold)));
            std::cout << json{{"accuracy", score.accuracy}, {"questions", score.credit.size()}, {"credits", score.credit}}
                             .dump(2)
                      << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
