#pragma once

#include <cmath>
#include <cstdint>

namespace arcqa::index {

/// Okapi BM25 parameters. k1 controls term-frequency saturation, b the
/// strength of document-length normalization.
struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    void validate() const;

    friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
};

/// Lucene-style idf; always positive, so every matching term adds score.
inline double bm25_idf(std::uint64_t doc_count, std::uint64_t doc_freq) {
    const double n = static_cast<double>(doc_count);
    const double df = static_cast<double>(doc_freq);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

inline double bm25_tf_part(const Bm25Params& p, std::uint32_t tf, double doc_len,
                           double avg_doc_len) {
    const double f = static_cast<double>(tf);
    return f * (p.k1 + 1.0) / (f + p.k1 * (1.0 - p.b + p.b * doc_len / avg_doc_len));
}

}  // namespace arcqa::index
