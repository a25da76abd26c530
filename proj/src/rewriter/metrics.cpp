#include "arcqa/rewriter/metrics.hpp"

#include "arcqa/error.hpp"

namespace arcqa::rewriter {

void ConfusionCounter::add(const std::vector<int>& gold, const std::vector<int>& predicted) {
    if (gold.size() != predicted.size()) {
        throw InvalidArgument("metrics: gold and predicted lengths differ");
    }
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const bool g = gold[i] == 1;
        const bool p = predicted[i] == 1;
        if (g && p) {
            ++m_.tp;
        } else if (!g && p) {
            ++m_.fp;
        } else if (g && !p) {
            ++m_.fn;
        } else {
            ++m_.tn;
        }
    }
}

TokenMetrics ConfusionCounter::finish() const {
    TokenMetrics m = m_;
    const auto total = m.tp + m.fp + m.fn + m.tn;
    m.accuracy = total == 0 ? 0.0 : static_cast<double>(m.tp + m.tn) / static_cast<double>(total);
    m.precision = (m.tp + m.fp) == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    m.recall = (m.tp + m.fn) == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    m.f1 = (m.precision + m.recall) == 0.0 ? 0.0
                                           : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

TokenMetrics token_metrics(const std::vector<int>& gold, const std::vector<int>& predicted) {
    ConfusionCounter c;
    c.add(gold, predicted);
    return c.finish();
}

}  // namespace arcqa::rewriter
