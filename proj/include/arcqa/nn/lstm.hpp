#pragma once

#include <span>
#include <string>
#include <vector>

#include "arcqa/nn/params.hpp"

namespace arcqa::nn {

/// Single-layer LSTM without peepholes. Gate rows are stacked in the order
/// input, forget, cell candidate, output:
///   z_t = W x_t + U h_{t-1} + b
///   c_t = f * c_{t-1} + i * g,   h_t = o * tanh(c_t)
struct LstmParams {
    Mat w_in;   // 4h x in
    Mat w_rec;  // 4h x h
    Vec bias;   // 4h

    static LstmParams zeros(Eigen::Index input_dim, Eigen::Index hidden_dim);
    static LstmParams glorot(Eigen::Index input_dim, Eigen::Index hidden_dim, Rng& rng);

    [[nodiscard]] Eigen::Index input_dim() const { return w_in.cols(); }
    [[nodiscard]] Eigen::Index hidden_dim() const { return w_rec.cols(); }

    void collect(ParamList& out, const std::string& prefix);
};

/// Activations kept for the backward pass.
struct LstmTrace {
    std::vector<Vec> inputs;
    std::vector<Vec> gates;  // activated i, f, g, o stacked (4h)
    std::vector<Vec> cells;
    std::vector<Vec> hidden;
};

/// Runs the recurrence over inputs in the given order from zero state.
LstmTrace lstm_forward(const LstmParams& p, std::span<const Vec> inputs);

/// Backpropagation through time. d_hidden[t] is dL/dh_t coming from above;
/// returns dL/dx_t and accumulates parameter gradients into grads.
std::vector<Vec> lstm_backward(const LstmParams& p, const LstmTrace& trace,
                               std::span<const Vec> d_hidden, LstmParams& grads);

struct BiLstmParams {
    LstmParams fwd;
    LstmParams bwd;

    static BiLstmParams zeros(Eigen::Index input_dim, Eigen::Index hidden_dim);
    static BiLstmParams glorot(Eigen::Index input_dim, Eigen::Index hidden_dim, Rng& rng);

    [[nodiscard]] Eigen::Index hidden_dim() const { return fwd.hidden_dim(); }
    [[nodiscard]] Eigen::Index output_dim() const { return 2 * fwd.hidden_dim(); }

    void collect(ParamList& out, const std::string& prefix);
};

struct BiLstmTrace {
    LstmTrace fwd;
    LstmTrace bwd;  // over the reversed sequence
    std::vector<Vec> outputs;  // [h_fwd_t ; h_bwd_t], 2h each
};

BiLstmTrace bilstm_forward(const BiLstmParams& p, std::span<const Vec> inputs);

std::vector<Vec> bilstm_backward(const BiLstmParams& p, const BiLstmTrace& trace,
                                 std::span<const Vec> d_outputs, BiLstmParams& grads);

}  // namespace arcqa::nn
