// Serial reference kernels against their OpenMP counterparts.
//   ./bench_kernels --benchmark_counters_tabular=true
// Thread count follows OMP_NUM_THREADS.
#include <cmath>
#include <map>
#include <memory>
#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "arcqa/pipeline/pipeline.hpp"

using namespace arcqa;

namespace {

std::vector<std::string> make_vocab(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back("w" + std::to_string(i));
    }
    return v;
}

// Zipf-ish word choice so postings lists have realistic skew.
std::string sentence(std::mt19937_64& rng, const std::vector<std::string>& vocab, std::size_t len) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        const auto idx = static_cast<std::size_t>(std::pow(u(rng), 3.0) * static_cast<double>(vocab.size()));
        s += (i ? " " : "") + vocab[std::min(idx, vocab.size() - 1)];
    }
    return s;
}

const std::vector<std::string>& corpus(std::size_t docs) {
    static std::map<std::size_t, std::vector<std::string>> cache;
    auto& c = cache[docs];
    if (c.empty()) {
        std::mt19937_64 rng(1);
        const auto vocab = make_vocab(5000);
        for (std::size_t i = 0; i < docs; ++i) {
            c.push_back(sentence(rng, vocab, 8 + rng() % 16));
        }
    }
    return c;
}

void BM_BuildIndexSerial(benchmark::State& state) {
    const auto& docs = corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(index::build_index_serial(docs, {}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BuildIndexParallel(benchmark::State& state) {
    const auto& docs = corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(index::build_index(docs, {}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = omp_get_max_threads();
}

struct Exam {
    pipeline::PipelineConfig config;
    pipeline::Components components;
    std::vector<question::Question> questions;
};

const Exam& exam(std::size_t n) {
    static std::map<std::size_t, Exam> cache;
    auto& e = cache[n];
    if (e.questions.empty()) {
        e.components.index = std::make_shared<const index::Index>(index::build_index(corpus(20000), {}));
        e.components.scorer = std::make_shared<const entailment::LexicalScorer>();
        e.config.rule = pipeline::Rule::ai2;
        std::mt19937_64 rng(2);
        const auto vocab = make_vocab(5000);
        for (std::size_t i = 0; i < n; ++i) {
            question::Question q;
            q.id = "q" + std::to_string(i);
            q.stem = "which " + sentence(rng, vocab, 10);
            for (const char* label : {"A", "B", "C", "D"}) {
                q.choices.push_back({label, sentence(rng, vocab, 2)});
            }
            e.questions.push_back(std::move(q));
        }
    }
    return e;
}

void BM_AnswerAllSerial(benchmark::State& state) {
    const auto& e = exam(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::answer_all_serial(e.questions, e.config, e.components));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AnswerAllParallel(benchmark::State& state) {
    const auto& e = exam(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::answer_all(e.questions, e.config, e.components));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_BuildIndexSerial)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildIndexParallel)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AnswerAllSerial)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AnswerAllParallel)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
