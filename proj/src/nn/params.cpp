#include "arcqa/nn/params.hpp"

#include <cmath>

#include "arcqa/error.hpp"
#include "arcqa/io/binary.hpp"

namespace arcqa::nn {

namespace {

double uniform(double limit, Rng& rng) {
    // 53 random mantissa bits mapped to [-limit, limit).
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (2.0 * unit - 1.0) * limit;
}

}  // namespace

Mat glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = uniform(limit, rng);
    }
    return m;
}

Vec uniform_vector(Eigen::Index n, double limit, Rng& rng) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = uniform(limit, rng);
    }
    return v;
}

void zero(const ParamList& params) {
    for (const auto& p : params) {
        std::fill(p.data, p.data + p.size, 0.0);
    }
}

double squared_norm(const ParamList& params) {
    double s = 0.0;
    for (const auto& p : params) {
        for (double v : p.values()) {
            s += v * v;
        }
    }
    return s;
}

void sgd_step(const ParamList& params, const ParamList& grads, double lr) {
    if (params.size() != grads.size()) {
        throw ConfigError("sgd_step: parameter/gradient layout mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i];
        const auto& g = grads[i];
        for (std::size_t j = 0; j < p.size; ++j) {
            p.data[j] -= lr * g.data[j];
        }
    }
}

double clip_global_norm(const ParamList& grads, double max_norm) {
    const double norm = std::sqrt(squared_norm(grads));
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (const auto& g : grads) {
            for (double& v : g.values()) {
                v *= scale;
            }
        }
    }
    return norm;
}

void write_params(io::BinaryWriter& w, const ParamList& params) {
    w.put<std::uint64_t>(params.size());
    for (const auto& p : params) {
        w.put_string(p.name);
        w.put<std::uint64_t>(p.size);
        for (double v : p.values()) {
            w.put(v);
        }
    }
}

void read_params(io::BinaryReader& r, const ParamList& params) {
    const auto count = r.get<std::uint64_t>();
    if (count != params.size()) {
        r.fail("parameter count mismatch");
    }
    for (const auto& p : params) {
        const auto name = r.get_string();
        const auto size = r.get<std::uint64_t>();
        if (name != p.name || size != p.size) {
            r.fail("parameter '" + name + "' does not match expected '" + p.name + "'");
        }
        for (double& v : p.values()) {
            v = r.get<double>();
        }
    }
}

}  // namespace arcqa::nn
