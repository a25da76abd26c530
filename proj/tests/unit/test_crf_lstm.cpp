#include <cmath>
#include <random>

#include "doctest.h"

#include "arcqa/nn/lstm.hpp"
#include "arcqa/rewriter/crf.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

using namespace arcqa;
using nn::Mat;
using nn::Vec;
using rewriter::CrfParams;

namespace {

Mat random_mat(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Mat m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = nd(rng);
    }
    return m;
}

CrfParams random_crf(Eigen::Index labels, std::mt19937_64& rng) {
    return {random_mat(labels, labels, rng), random_mat(labels, 1, rng), random_mat(labels, 1, rng)};
}

}  // namespace

TEST_CASE("crf log partition closed forms") {
    SUBCASE("single label has one path") {
        Mat em(4, 1);
        em << 0.3, -1.0, 2.0, 0.5;
        CrfParams crf{Mat::Constant(1, 1, 0.7), Vec::Constant(1, -0.2), Vec::Constant(1, 0.4)};
        const double expected = em.sum() - 0.2 + 3 * 0.7 + 0.4;
        CHECK(rewriter::crf_log_partition(em, crf) == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("all-zero scores give T ln L") {
        for (int labels = 1; labels <= 4; ++labels) {
            for (int steps = 1; steps <= 5; ++steps) {
                const Mat em = Mat::Zero(steps, labels);
                CHECK(rewriter::crf_log_partition(em, CrfParams::zeros(labels)) ==
                      doctest::Approx(steps * std::log(static_cast<double>(labels))).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("crf matches path enumeration") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> steps_d(1, 6);
    std::uniform_int_distribution<int> labels_d(1, 4);
    for (int round = 0; round < 100; ++round) {
        const int steps = steps_d(rng);
        const int labels = labels_d(rng);
        const Mat em = random_mat(steps, labels, rng, 2.0);
        const auto crf = random_crf(labels, rng);
        const auto oracle = testing::enumerate_crf(em, crf.transitions, crf.start, crf.stop);
        const double log_z = rewriter::crf_log_partition(em, crf);
        CHECK(std::abs(log_z - oracle.log_z) < 1e-8);
        const auto vit = rewriter::crf_viterbi(em, crf);
        CHECK(vit.path == oracle.best_path);
        CHECK(vit.score == doctest::Approx(oracle.best_score).epsilon(1e-12));
        CHECK(vit.score <= log_z + 1e-12);
        // log Z bounds every single path score.
        testing::for_each_path(steps, labels, [&](const std::vector<int>& p) {
            CHECK(rewriter::crf_path_score(em, crf, p) <= log_z + 1e-12);
        });
    }
}

TEST_CASE("viterbi edge cases") {
    SUBCASE("zero transitions pick the per-position argmax") {
        Mat em(3, 3);
        em << 1, 5, 0,
              9, 2, 3,
              0, 0, 4;
        CHECK(rewriter::crf_viterbi(em, CrfParams::zeros(3)).path == std::vector<int>{1, 0, 2});
    }
    SUBCASE("single step uses start and stop") {
        Mat em(1, 2);
        em << 1.0, 0.5;
        CrfParams crf = CrfParams::zeros(2);
        crf.start << 0.0, 1.0;
        crf.stop << 0.0, 0.0;
        const auto v = rewriter::crf_viterbi(em, crf);
        CHECK(v.path == std::vector<int>{1});
        CHECK(v.score == doctest::Approx(1.5));
    }
    SUBCASE("ties resolve to the lower label") {
        const Mat em = Mat::Zero(3, 3);
        CHECK(rewriter::crf_viterbi(em, CrfParams::zeros(3)).path == std::vector<int>{0, 0, 0});
    }
    SUBCASE("dominant path carries all the mass") {
        Mat em = Mat::Constant(4, 2, -60.0);
        for (int t = 0; t < 4; ++t) {
            em(t, t % 2) = 60.0;
        }
        const auto crf = CrfParams::zeros(2);
        const auto v = rewriter::crf_viterbi(em, crf);
        CHECK(std::abs(v.score - rewriter::crf_log_partition(em, crf)) < 1e-12);
    }
}

TEST_CASE("crf nll is non-negative and vanishes for a dominant gold path") {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 50; ++round) {
        const Mat em = random_mat(5, 3, rng, 3.0);
        const auto crf = random_crf(3, rng);
        std::vector<int> gold(5);
        for (auto& g : gold) {
            g = static_cast<int>(rng() % 3);
        }
        const auto nll = rewriter::crf_nll(em, crf, gold);
        CHECK(nll.loss >= 0.0);
        const double prob = std::exp(-nll.loss);
        CHECK(prob > 0.0);
        CHECK(prob <= 1.0);
    }
    Mat em = Mat::Constant(4, 2, 0.0);
    const std::vector<int> gold = {1, 0, 0, 1};
    for (int t = 0; t < 4; ++t) {
        em(t, gold[static_cast<std::size_t>(t)]) = 40.0;
    }
    CHECK(rewriter::crf_nll(em, CrfParams::zeros(2), gold).loss < 1e-6);
}

TEST_CASE("crf nll gradient matches finite differences") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 10; ++round) {
        Mat em = random_mat(5, 3, rng);
        auto crf = random_crf(3, rng);
        const std::vector<int> gold = {0, 2, 1, 1, 0};
        auto out = rewriter::crf_nll(em, crf, gold);

        nn::ParamList params;
        nn::add_param(params, "emissions", em);
        crf.collect(params, "crf");
        nn::ParamList grads;
        nn::add_param(grads, "emissions", out.d_emissions);
        out.grads.collect(grads, "crf");
        const auto res = testing::gradient_check(
            params, grads, [&] { return rewriter::crf_nll(em, crf, gold).loss; }, 6, 100 + round);
        CHECK(res.max_rel_error < 1e-4);
    }
}

TEST_CASE("lstm shapes and zero parameters") {
    std::mt19937_64 rng(1);
    nn::Rng init(2);
    const auto p = nn::BiLstmParams::glorot(3, 4, init);
    const std::vector<Vec> one = {random_mat(3, 1, rng)};
    const auto tr = nn::bilstm_forward(p, one);
    REQUIRE(tr.outputs.size() == 1);
    CHECK(tr.outputs[0].size() == 8);
    // With one input, forward and backward directions each see only x_0.
    CHECK(tr.outputs[0].head(4).isApprox(nn::lstm_forward(p.fwd, one).hidden[0]));
    CHECK(tr.outputs[0].tail(4).isApprox(nn::lstm_forward(p.bwd, one).hidden[0]));

    const auto zeros = nn::BiLstmParams::zeros(3, 4);
    std::vector<Vec> seq;
    for (int i = 0; i < 5; ++i) {
        seq.push_back(random_mat(3, 1, rng));
    }
    for (const auto& out : nn::bilstm_forward(zeros, seq).outputs) {
        CHECK(out.isZero(0.0));
    }
}

TEST_CASE("bilstm gradient matches finite differences") {
    std::mt19937_64 rng(21);
    nn::Rng init(22);
    auto p = nn::BiLstmParams::glorot(3, 4, init);
    p.fwd.bias = random_mat(16, 1, rng, 0.5);
    p.bwd.bias = random_mat(16, 1, rng, 0.5);
    std::vector<Vec> inputs;
    for (int i = 0; i < 3; ++i) {
        inputs.push_back(random_mat(3, 1, rng));
    }
    // Scalar loss: fixed random projection of every output state.
    std::vector<Vec> proj;
    for (int i = 0; i < 3; ++i) {
        proj.push_back(random_mat(8, 1, rng));
    }
    const auto loss = [&] {
        const auto tr = nn::bilstm_forward(p, inputs);
        double s = 0.0;
        for (std::size_t t = 0; t < tr.outputs.size(); ++t) {
            s += proj[t].dot(tr.outputs[t]);
        }
        return s;
    };
    const auto tr = nn::bilstm_forward(p, inputs);
    auto grads = nn::BiLstmParams::zeros(3, 4);
    const auto d_inputs = nn::bilstm_backward(p, tr, proj, grads);

    nn::ParamList params;
    p.collect(params, "lstm");
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        nn::add_param(params, "x" + std::to_string(i), inputs[i]);
    }
    nn::ParamList analytic;
    grads.collect(analytic, "lstm");
    auto dx = d_inputs;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        nn::add_param(analytic, "x" + std::to_string(i), dx[i]);
    }
    const auto res = testing::gradient_check(params, analytic, loss, 12, 5);
    CHECK(res.probes > 50);
    CHECK(res.max_rel_error < 1e-4);
}
