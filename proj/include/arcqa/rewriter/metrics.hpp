#pragma once

#include <cstddef>
#include <vector>

namespace arcqa::rewriter {

/// Token-level scores with "essential" (label 1) as the positive class.
struct TokenMetrics {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

class ConfusionCounter {
public:
    void add(const std::vector<int>& gold, const std::vector<int>& predicted);
    /// Precision/recall are 0 when their denominator is 0; F1 is 0 when P+R is 0.
    [[nodiscard]] TokenMetrics finish() const;

private:
    TokenMetrics m_;
};

TokenMetrics token_metrics(const std::vector<int>& gold, const std::vector<int>& predicted);

}  // namespace arcqa::rewriter
