#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "arcqa/nn/params.hpp"

namespace arcqa::testing {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t probes = 0;
};

/// Central differences on `probes_per_tensor` random entries of every tensor.
/// Relative error is |a - n| / max(|a|, |n|, 1e-7); the floor keeps
/// vanishing gradients from turning round-off into a large ratio.
inline GradCheckResult gradient_check(const nn::ParamList& params, const nn::ParamList& analytic,
                                      const std::function<double()>& loss, std::size_t probes_per_tensor,
                                      std::uint64_t seed, double eps = 1e-5) {
    std::mt19937_64 rng(seed);
    GradCheckResult out;
    for (std::size_t t = 0; t < params.size(); ++t) {
        const auto& p = params[t];
        if (p.size == 0) {
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, p.size - 1);
        for (std::size_t k = 0; k < std::min(probes_per_tensor, p.size); ++k) {
            const auto idx = pick(rng);
            const double saved = p.data[idx];
            p.data[idx] = saved + eps;
            const double up = loss();
            p.data[idx] = saved - eps;
            const double down = loss();
            p.data[idx] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double a = analytic[t].data[idx];
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-7});
            out.max_rel_error = std::max(out.max_rel_error, rel);
            ++out.probes;
        }
    }
    return out;
}

}  // namespace arcqa::testing
