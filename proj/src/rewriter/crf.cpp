#include "arcqa/rewriter/crf.hpp"

#include <cmath>
#include <limits>

#include "arcqa/error.hpp"

namespace arcqa::rewriter {

namespace {

double log_sum_exp(const Vec& v) {
    const double m = v.maxCoeff();
    if (!std::isfinite(m)) {
        return m;
    }
    return m + std::log((v.array() - m).exp().sum());
}

void check_shapes(const Mat& emissions, const CrfParams& crf) {
    if (emissions.rows() < 1 || emissions.cols() < 1) {
        throw InvalidArgument("crf: emissions must be at least 1 x 1");
    }
    const auto l = emissions.cols();
    if (crf.transitions.rows() != l || crf.transitions.cols() != l || crf.start.size() != l ||
        crf.stop.size() != l) {
        throw ConfigError("crf: label count of emissions and transitions differ");
    }
}

// alpha(t, j) = log sum over prefixes ending in label j at step t.
Mat forward_table(const Mat& em, const CrfParams& crf) {
    const auto steps = em.rows();
    const auto l = em.cols();
    Mat alpha(steps, l);
    alpha.row(0) = crf.start.transpose() + em.row(0);
    Vec tmp(l);
    for (Eigen::Index t = 1; t < steps; ++t) {
        for (Eigen::Index j = 0; j < l; ++j) {
            tmp = alpha.row(t - 1).transpose() + crf.transitions.col(j);
            alpha(t, j) = log_sum_exp(tmp) + em(t, j);
        }
    }
    return alpha;
}

// beta(t, i) = log sum over suffixes following label i at step t (incl. stop).
Mat backward_table(const Mat& em, const CrfParams& crf) {
    const auto steps = em.rows();
    const auto l = em.cols();
    Mat beta(steps, l);
    beta.row(steps - 1) = crf.stop.transpose();
    Vec tmp(l);
    for (Eigen::Index t = steps - 1; t-- > 0;) {
        for (Eigen::Index i = 0; i < l; ++i) {
            tmp = crf.transitions.row(i).transpose() + em.row(t + 1).transpose() +
                  beta.row(t + 1).transpose();
            beta(t, i) = log_sum_exp(tmp);
        }
    }
    return beta;
}

}  // namespace

CrfParams CrfParams::zeros(Eigen::Index labels) {
    return {Mat::Zero(labels, labels), Vec::Zero(labels), Vec::Zero(labels)};
}

void CrfParams::collect(nn::ParamList& out, const std::string& prefix) {
    nn::add_param(out, prefix + ".transitions", transitions);
    nn::add_param(out, prefix + ".start", start);
    nn::add_param(out, prefix + ".stop", stop);
}

double crf_path_score(const Mat& em, const CrfParams& crf, const std::vector<int>& path) {
    check_shapes(em, crf);
    if (static_cast<Eigen::Index>(path.size()) != em.rows()) {
        throw InvalidArgument("crf: path length differs from sequence length");
    }
    for (int y : path) {
        if (y < 0 || y >= em.cols()) {
            throw InvalidArgument("crf: label " + std::to_string(y) + " out of range");
        }
    }
    double s = crf.start[path.front()] + crf.stop[path.back()];
    for (std::size_t t = 0; t < path.size(); ++t) {
        s += em(static_cast<Eigen::Index>(t), path[t]);
        if (t > 0) {
            s += crf.transitions(path[t - 1], path[t]);
        }
    }
    return s;
}

double crf_log_partition(const Mat& em, const CrfParams& crf) {
    check_shapes(em, crf);
    const Mat alpha = forward_table(em, crf);
    return log_sum_exp(alpha.row(em.rows() - 1).transpose() + crf.stop);
}

ViterbiResult crf_viterbi(const Mat& em, const CrfParams& crf) {
    check_shapes(em, crf);
    const auto steps = em.rows();
    const auto l = em.cols();
    Mat best(steps, l);
    Eigen::MatrixXi back(steps, l);
    best.row(0) = crf.start.transpose() + em.row(0);
    for (Eigen::Index t = 1; t < steps; ++t) {
        for (Eigen::Index j = 0; j < l; ++j) {
            Eigen::Index arg = 0;
            double top = best(t - 1, 0) + crf.transitions(0, j);
            for (Eigen::Index i = 1; i < l; ++i) {
                const double cand = best(t - 1, i) + crf.transitions(i, j);
                if (cand > top) {
                    top = cand;
                    arg = i;
                }
            }
            best(t, j) = top + em(t, j);
            back(t, j) = static_cast<int>(arg);
        }
    }
    Eigen::Index last = 0;
    double top = best(steps - 1, 0) + crf.stop[0];
    for (Eigen::Index j = 1; j < l; ++j) {
        const double cand = best(steps - 1, j) + crf.stop[j];
        if (cand > top) {
            top = cand;
            last = j;
        }
    }
    ViterbiResult out;
    out.score = top;
    out.path.resize(static_cast<std::size_t>(steps));
    out.path.back() = static_cast<int>(last);
    for (Eigen::Index t = steps - 1; t > 0; --t) {
        out.path[static_cast<std::size_t>(t - 1)] = back(t, out.path[static_cast<std::size_t>(t)]);
    }
    return out;
}

CrfLoss crf_nll(const Mat& em, const CrfParams& crf, const std::vector<int>& gold) {
    const double gold_score = crf_path_score(em, crf, gold);
    const auto steps = em.rows();
    const auto l = em.cols();
    const Mat alpha = forward_table(em, crf);
    const Mat beta = backward_table(em, crf);
    const double log_z = log_sum_exp(alpha.row(steps - 1).transpose() + crf.stop);

    CrfLoss out;
    out.loss = log_z - gold_score;
    out.grads = CrfParams::zeros(l);
    // Unary marginals.
    out.d_emissions = ((alpha + beta).array() - log_z).exp().matrix();
    out.grads.start = out.d_emissions.row(0).transpose();
    out.grads.stop = out.d_emissions.row(steps - 1).transpose();
    // Pairwise marginals.
    for (Eigen::Index t = 1; t < steps; ++t) {
        for (Eigen::Index i = 0; i < l; ++i) {
            for (Eigen::Index j = 0; j < l; ++j) {
                out.grads.transitions(i, j) +=
                    std::exp(alpha(t - 1, i) + crf.transitions(i, j) + em(t, j) + beta(t, j) - log_z);
            }
        }
    }
    // Minus the empirical counts of the gold path.
    out.grads.start[gold.front()] -= 1.0;
    out.grads.stop[gold.back()] -= 1.0;
    for (Eigen::Index t = 0; t < steps; ++t) {
        out.d_emissions(t, gold[static_cast<std::size_t>(t)]) -= 1.0;
        if (t > 0) {
            out.grads.transitions(gold[static_cast<std::size_t>(t - 1)], gold[static_cast<std::size_t>(t)]) -= 1.0;
        }
    }
    return out;
}

}  // namespace arcqa::rewriter
