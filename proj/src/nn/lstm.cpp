#include "arcqa/nn/lstm.hpp"

#include <algorithm>

#include "arcqa/error.hpp"

namespace arcqa::nn {

LstmParams LstmParams::zeros(Eigen::Index input_dim, Eigen::Index hidden_dim) {
    return {Mat::Zero(4 * hidden_dim, input_dim), Mat::Zero(4 * hidden_dim, hidden_dim),
            Vec::Zero(4 * hidden_dim)};
}

LstmParams LstmParams::glorot(Eigen::Index input_dim, Eigen::Index hidden_dim, Rng& rng) {
    LstmParams p;
    p.w_in = glorot_uniform(4 * hidden_dim, input_dim, rng);
    p.w_rec = glorot_uniform(4 * hidden_dim, hidden_dim, rng);
    p.bias = Vec::Zero(4 * hidden_dim);
    return p;
}

void LstmParams::collect(ParamList& out, const std::string& prefix) {
    add_param(out, prefix + ".w_in", w_in);
    add_param(out, prefix + ".w_rec", w_rec);
    add_param(out, prefix + ".bias", bias);
}

LstmTrace lstm_forward(const LstmParams& p, std::span<const Vec> inputs) {
    const Eigen::Index h = p.hidden_dim();
    LstmTrace tr;
    tr.inputs.assign(inputs.begin(), inputs.end());
    tr.gates.reserve(inputs.size());
    tr.cells.reserve(inputs.size());
    tr.hidden.reserve(inputs.size());
    Vec h_prev = Vec::Zero(h);
    Vec c_prev = Vec::Zero(h);
    for (const auto& x : inputs) {
        if (x.size() != p.input_dim()) {
            throw ConfigError("lstm: input has dim " + std::to_string(x.size()) + ", expected " +
                              std::to_string(p.input_dim()));
        }
        Vec z = p.w_in * x + p.w_rec * h_prev + p.bias;
        for (Eigen::Index k = 0; k < h; ++k) {
            z[k] = sigmoid(z[k]);
            z[h + k] = sigmoid(z[h + k]);
            z[2 * h + k] = std::tanh(z[2 * h + k]);
            z[3 * h + k] = sigmoid(z[3 * h + k]);
        }
        Vec c = z.segment(h, h).cwiseProduct(c_prev) + z.segment(0, h).cwiseProduct(z.segment(2 * h, h));
        Vec hid = z.segment(3 * h, h).cwiseProduct(c.array().tanh().matrix());
        tr.gates.push_back(std::move(z));
        tr.cells.push_back(c);
        tr.hidden.push_back(hid);
        c_prev = std::move(c);
        h_prev = std::move(hid);
    }
    return tr;
}

std::vector<Vec> lstm_backward(const LstmParams& p, const LstmTrace& tr,
                               std::span<const Vec> d_hidden, LstmParams& grads) {
    const Eigen::Index h = p.hidden_dim();
    const std::size_t steps = tr.hidden.size();
    std::vector<Vec> d_inputs(steps);
    Vec dh_next = Vec::Zero(h);
    Vec dc_next = Vec::Zero(h);
    const Vec zero_state = Vec::Zero(h);
    Vec dz(4 * h);
    for (std::size_t s = steps; s-- > 0;) {
        const Vec& gates = tr.gates[s];
        const auto i = gates.segment(0, h).array();
        const auto f = gates.segment(h, h).array();
        const auto g = gates.segment(2 * h, h).array();
        const auto o = gates.segment(3 * h, h).array();
        const Vec& c_prev = s > 0 ? tr.cells[s - 1] : zero_state;
        const Vec& h_prev = s > 0 ? tr.hidden[s - 1] : zero_state;

        const Eigen::ArrayXd dh = (d_hidden[s] + dh_next).array();
        const Eigen::ArrayXd tanh_c = tr.cells[s].array().tanh();
        const Eigen::ArrayXd dc = dh * o * (1.0 - tanh_c.square()) + dc_next.array();

        dz.segment(0, h) = (dc * g * i * (1.0 - i)).matrix();
        dz.segment(h, h) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
        dz.segment(2 * h, h) = (dc * i * (1.0 - g.square())).matrix();
        dz.segment(3 * h, h) = (dh * tanh_c * o * (1.0 - o)).matrix();

        grads.w_in.noalias() += dz * tr.inputs[s].transpose();
        grads.w_rec.noalias() += dz * h_prev.transpose();
        grads.bias += dz;
        d_inputs[s] = p.w_in.transpose() * dz;
        dh_next = p.w_rec.transpose() * dz;
        dc_next = (dc * f).matrix();
    }
    return d_inputs;
}

BiLstmParams BiLstmParams::zeros(Eigen::Index input_dim, Eigen::Index hidden_dim) {
    return {LstmParams::zeros(input_dim, hidden_dim), LstmParams::zeros(input_dim, hidden_dim)};
}

BiLstmParams BiLstmParams::glorot(Eigen::Index input_dim, Eigen::Index hidden_dim, Rng& rng) {
    auto fwd = LstmParams::glorot(input_dim, hidden_dim, rng);
    auto bwd = LstmParams::glorot(input_dim, hidden_dim, rng);
    return {std::move(fwd), std::move(bwd)};
}

void BiLstmParams::collect(ParamList& out, const std::string& prefix) {
    fwd.collect(out, prefix + ".fwd");
    bwd.collect(out, prefix + ".bwd");
}

BiLstmTrace bilstm_forward(const BiLstmParams& p, std::span<const Vec> inputs) {
    BiLstmTrace tr;
    tr.fwd = lstm_forward(p.fwd, inputs);
    std::vector<Vec> reversed(inputs.rbegin(), inputs.rend());
    tr.bwd = lstm_forward(p.bwd, reversed);
    const Eigen::Index h = p.hidden_dim();
    const std::size_t n = inputs.size();
    tr.outputs.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        Vec out(2 * h);
        out << tr.fwd.hidden[t], tr.bwd.hidden[n - 1 - t];
        tr.outputs.push_back(std::move(out));
    }
    return tr;
}

std::vector<Vec> bilstm_backward(const BiLstmParams& p, const BiLstmTrace& tr,
                                 std::span<const Vec> d_outputs, BiLstmParams& grads) {
    const Eigen::Index h = p.hidden_dim();
    const std::size_t n = d_outputs.size();
    std::vector<Vec> d_fwd(n);
    std::vector<Vec> d_bwd(n);
    for (std::size_t t = 0; t < n; ++t) {
        d_fwd[t] = d_outputs[t].head(h);
        d_bwd[n - 1 - t] = d_outputs[t].tail(h);
    }
    auto dx = lstm_backward(p.fwd, tr.fwd, d_fwd, grads.fwd);
    auto dx_rev = lstm_backward(p.bwd, tr.bwd, d_bwd, grads.bwd);
    for (std::size_t t = 0; t < n; ++t) {
        dx[t] += dx_rev[n - 1 - t];
    }
    return dx;
}

}  // namespace arcqa::nn
