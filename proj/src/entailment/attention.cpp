#include "arcqa/entailment/attention.hpp"

#include "arcqa/error.hpp"

namespace arcqa::entailment {

AttentionResult attention(std::span<const Vec> p_states, std::span<const Vec> h_states) {
    if (p_states.empty() || h_states.empty()) {
        throw InvalidArgument("attention: premise and hypothesis states must be non-empty");
    }
    const auto k = static_cast<Eigen::Index>(p_states.size());
    const auto n = static_cast<Eigen::Index>(h_states.size());
    const auto width = p_states.front().size();
    AttentionResult out;
    out.e.resize(k, n);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& p = p_states[static_cast<std::size_t>(i)];
            const auto& h = h_states[static_cast<std::size_t>(j)];
            if (p.size() != width || h.size() != width) {
                throw ConfigError("attention: state widths differ");
            }
            out.e(i, j) = p.dot(h);
        }
    }
    out.alpha.resize(k, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double m = out.e.col(j).maxCoeff();
        const Eigen::ArrayXd w = (out.e.col(j).array() - m).exp();
        out.alpha.col(j) = (w / w.sum()).matrix();
    }
    out.a.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        Vec a = Vec::Zero(width);
        for (Eigen::Index i = 0; i < k; ++i) {
            a += out.alpha(i, j) * p_states[static_cast<std::size_t>(i)];
        }
        out.a.push_back(std::move(a));
    }
    return out;
}

AttentionGrads attention_backward(std::span<const Vec> p_states, std::span<const Vec> h_states,
                                  const AttentionResult& fwd, std::span<const Vec> d_a) {
    const auto k = static_cast<Eigen::Index>(p_states.size());
    const auto n = static_cast<Eigen::Index>(h_states.size());
    const auto width = p_states.front().size();
    AttentionGrads g;
    g.d_p.assign(p_states.size(), Vec::Zero(width));
    g.d_h.assign(h_states.size(), Vec::Zero(width));
    Vec d_alpha(k);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& da = d_a[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            g.d_p[iu] += fwd.alpha(i, j) * da;
            d_alpha[i] = p_states[iu].dot(da);
        }
        // Softmax Jacobian: de_i = alpha_i (d_alpha_i - sum_r alpha_r d_alpha_r).
        const double mean = fwd.alpha.col(j).dot(d_alpha);
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const double de = fwd.alpha(i, j) * (d_alpha[i] - mean);
            g.d_p[iu] += de * h_states[static_cast<std::size_t>(j)];
            g.d_h[static_cast<std::size_t>(j)] += de * p_states[iu];
        }
    }
    return g;
}

}  // namespace arcqa::entailment
