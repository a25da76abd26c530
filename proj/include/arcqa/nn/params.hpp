#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arcqa::io {
class BinaryWriter;
class BinaryReader;
}  // namespace arcqa::io

namespace arcqa::nn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Non-owning view of one trainable tensor. Parameter structs and their
/// gradient twins expose views in the same order, which is what lets the
/// optimizer, gradient checker and serializer stay generic.
struct ParamRef {
    std::string name;
    double* data = nullptr;
    std::size_t size = 0;

    [[nodiscard]] std::span<double> values() const { return {data, size}; }
};

using ParamList = std::vector<ParamRef>;

inline void add_param(ParamList& out, std::string name, Mat& m) {
    out.push_back({std::move(name), m.data(), static_cast<std::size_t>(m.size())});
}
inline void add_param(ParamList& out, std::string name, Vec& v) {
    out.push_back({std::move(name), v.data(), static_cast<std::size_t>(v.size())});
}

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Mat glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Vec uniform_vector(Eigen::Index n, double limit, Rng& rng);

void zero(const ParamList& params);
double squared_norm(const ParamList& params);

/// params -= lr * grads.
void sgd_step(const ParamList& params, const ParamList& grads, double lr);

/// Rescales grads so their global L2 norm is at most max_norm. Returns the
/// norm before clipping.
double clip_global_norm(const ParamList& grads, double max_norm);

/// Writes name, size and raw values of every tensor.
void write_params(io::BinaryWriter& w, const ParamList& params);
/// Reads into already-shaped tensors; names and sizes must match.
void read_params(io::BinaryReader& r, const ParamList& params);

inline double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace arcqa::nn
