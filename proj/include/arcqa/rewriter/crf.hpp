#pragma once

#include <string>
#include <vector>

#include "arcqa/nn/params.hpp"

namespace arcqa::rewriter {

using nn::Mat;
using nn::Vec;

/// Linear-chain CRF potentials over L labels. transitions(i, j) scores moving
/// from label i at step t-1 to label j at step t.
struct CrfParams {
    Mat transitions;  // L x L
    Vec start;        // L
    Vec stop;         // L

    static CrfParams zeros(Eigen::Index labels);
    [[nodiscard]] Eigen::Index labels() const { return start.size(); }
    void collect(nn::ParamList& out, const std::string& prefix);
};

/// Unnormalized log-score of a label path. emissions is T x L.
double crf_path_score(const Mat& emissions, const CrfParams& crf, const std::vector<int>& path);

/// log Z via the forward recursion in log space.
double crf_log_partition(const Mat& emissions, const CrfParams& crf);

struct ViterbiResult {
    std::vector<int> path;
    double score = 0.0;
};

/// Highest-scoring path. Ties resolve to the lower label index.
ViterbiResult crf_viterbi(const Mat& emissions, const CrfParams& crf);

struct CrfLoss {
    double loss = 0.0;       // log Z - score(gold)
    Mat d_emissions;         // T x L
    CrfParams grads;
};

/// Negative log-likelihood of the gold path and its gradient, from
/// forward-backward marginals.
CrfLoss crf_nll(const Mat& emissions, const CrfParams& crf, const std::vector<int>& gold);

}  // namespace arcqa::rewriter
