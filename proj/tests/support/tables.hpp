#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "arcqa/resolver/rules.hpp"
#include "support/oracles.hpp"

namespace arcqa::testing {

struct RandomTable {
    std::vector<std::string> labels;
    std::vector<OracleRow> rows;
};

/// Small value grids so retrieval and entailment ties are common. A choice's
/// query returns each document at most once, so (label, doc) pairs are unique.
inline RandomTable random_table(std::mt19937_64& rng) {
    RandomTable t;
    const auto n_labels = 1 + rng() % 5;
    for (std::size_t i = 0; i < n_labels; ++i) {
        t.labels.emplace_back(1, static_cast<char>('A' + i));
    }
    const auto n_rows = rng() % 40;
    std::set<std::pair<std::string, unsigned>> used;
    for (std::size_t i = 0; i < n_rows; ++i) {
        OracleRow r;
        r.label = t.labels[rng() % n_labels];
        r.doc = static_cast<unsigned>(rng() % 12);
        if (!used.emplace(r.label, r.doc).second) {
            continue;
        }
        r.es = static_cast<double>(rng() % 9) * 0.5;
        r.p = static_cast<double>(rng() % 11) / 10.0;
        t.rows.push_back(r);
    }
    return t;
}

inline std::vector<resolver::Evidence> to_evidence(const std::vector<OracleRow>& rows) {
    std::vector<resolver::Evidence> out;
    for (const auto& r : rows) {
        out.push_back({r.label, r.doc, r.es, r.p});
    }
    return out;
}

/// Strictly increasing on [0, 1] with f(0) = 0, since a choice without
/// evidence keeps the untransformed default score of 0.
inline std::function<double(double)> random_monotone(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 5.0);
    const double a = u(rng), c = u(rng);
    switch (rng() % 3) {
        case 0:
            return [a](double x) { return std::pow(x, a); };
        case 1:
            return [c](double x) { return std::expm1(c * x) / std::expm1(c); };
        default:
            return [a, c](double x) { return std::log1p(c * x) + a * x * x * x; };
    }
}

}  // namespace arcqa::testing
