#pragma once

#include <span>
#include <vector>

#include "arcqa/nn/params.hpp"

namespace arcqa::entailment {

using nn::Mat;
using nn::Vec;

/// Premise-over-hypothesis dot-product attention.
///   e(i, j)     = p_i . h_j
///   alpha(i, j) = softmax over i of e(., j)
///   a_j         = sum_i alpha(i, j) p_i
struct AttentionResult {
    Mat e;               // K x N
    Mat alpha;           // K x N, columns sum to 1
    std::vector<Vec> a;  // N vectors, same width as p_i
};

AttentionResult attention(std::span<const Vec> p_states, std::span<const Vec> h_states);

struct AttentionGrads {
    std::vector<Vec> d_p;  // K
    std::vector<Vec> d_h;  // N
};

/// Backward pass given dL/da_j.
AttentionGrads attention_backward(std::span<const Vec> p_states, std::span<const Vec> h_states,
                                  const AttentionResult& fwd, std::span<const Vec> d_a);

}  // namespace arcqa::entailment
