#pragma once

// Independent reference computations used only by tests. None of these call
// into the code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arcqa::testing {

/// BM25 straight from the formula over raw token lists, with long double
/// accumulation. No inverted index involved.
inline double bm25_direct(const std::vector<std::vector<std::string>>& docs,
                          const std::vector<std::string>& query, std::size_t doc, double k1, double b) {
    const long double n = static_cast<long double>(docs.size());
    long double total_len = 0;
    for (const auto& d : docs) {
        total_len += static_cast<long double>(d.size());
    }
    const long double avg = total_len / n;
    std::set<std::string> distinct(query.begin(), query.end());
    long double score = 0;
    for (const auto& term : distinct) {
        long double df = 0;
        for (const auto& d : docs) {
            df += std::find(d.begin(), d.end(), term) != d.end() ? 1 : 0;
        }
        const long double tf = static_cast<long double>(std::count(docs[doc].begin(), docs[doc].end(), term));
        if (tf == 0) {
            continue;
        }
        const long double idf = std::log(1.0L + (n - df + 0.5L) / (df + 0.5L));
        const long double dl = static_cast<long double>(docs[doc].size());
        score += idf * tf * (k1 + 1.0L) / (tf + k1 * (1.0L - b + b * dl / avg));
    }
    return static_cast<double>(score);
}

/// Visits every label path of length T over L labels.
inline void for_each_path(int steps, int labels, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> path(static_cast<std::size_t>(steps), 0);
    while (true) {
        fn(path);
        int pos = steps - 1;
        while (pos >= 0 && path[static_cast<std::size_t>(pos)] == labels - 1) {
            path[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            return;
        }
        ++path[static_cast<std::size_t>(pos)];
    }
}

inline double path_score_direct(const Eigen::MatrixXd& em, const Eigen::MatrixXd& trans,
                                const Eigen::VectorXd& start, const Eigen::VectorXd& stop,
                                const std::vector<int>& path) {
    double s = start[path.front()] + stop[path.back()];
    for (std::size_t t = 0; t < path.size(); ++t) {
        s += em(static_cast<Eigen::Index>(t), path[t]);
        if (t > 0) {
            s += trans(path[t - 1], path[t]);
        }
    }
    return s;
}

struct Enumerated {
    double log_z = 0.0;
    std::vector<int> best_path;
    double best_score = 0.0;
};

inline Enumerated enumerate_crf(const Eigen::MatrixXd& em, const Eigen::MatrixXd& trans,
                                const Eigen::VectorXd& start, const Eigen::VectorXd& stop) {
    std::vector<double> scores;
    Enumerated out;
    out.best_score = -INFINITY;
    for_each_path(static_cast<int>(em.rows()), static_cast<int>(em.cols()), [&](const std::vector<int>& p) {
        const double s = path_score_direct(em, trans, start, stop, p);
        scores.push_back(s);
        if (s > out.best_score) {
            out.best_score = s;
            out.best_path = p;
        }
    });
    const double m = *std::max_element(scores.begin(), scores.end());
    long double sum = 0;
    for (double s : scores) {
        sum += std::exp(static_cast<long double>(s - m));
    }
    out.log_z = m + static_cast<double>(std::log(sum));
    return out;
}

/// Naive attention: builds alpha element by element from exp/sum with no
/// max-shift, using long double.
inline std::vector<Eigen::VectorXd> attention_direct(const std::vector<Eigen::VectorXd>& p,
                                                     const std::vector<Eigen::VectorXd>& h) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& hj : h) {
        long double denom = 0;
        for (const auto& pi : p) {
            long double dot = 0;
            for (Eigen::Index d = 0; d < pi.size(); ++d) {
                dot += static_cast<long double>(pi[d]) * hj[d];
            }
            denom += std::exp(dot);
        }
        Eigen::VectorXd a = Eigen::VectorXd::Zero(p.front().size());
        for (const auto& pi : p) {
            long double dot = 0;
            for (Eigen::Index d = 0; d < pi.size(); ++d) {
                dot += static_cast<long double>(pi[d]) * hj[d];
            }
            const double w = static_cast<double>(std::exp(dot) / denom);
            a += w * pi;
        }
        out.push_back(a);
    }
    return out;
}

struct OracleRow {
    std::string label;
    unsigned doc = 0;
    double es = 0.0;
    double p = 0.0;
};

inline bool oracle_row_order(const OracleRow& a, const OracleRow& b) {
    if (a.es != b.es) {
        return a.es > b.es;
    }
    if (a.doc != b.doc) {
        return a.doc < b.doc;
    }
    return a.label < b.label;
}

/// Decision rules by explicit full sort and slice. Returns per-label scores
/// and the argmax set (label order).
struct OracleOutcome {
    std::map<std::string, double> scores;
    std::vector<std::string> selected;
};

inline OracleOutcome oracle_finish(const std::vector<std::string>& labels, std::map<std::string, double> scores) {
    OracleOutcome out;
    double best = -INFINITY;
    for (const auto& l : labels) {
        best = std::max(best, scores[l]);
    }
    for (const auto& l : labels) {
        if (scores[l] == best) {
            out.selected.push_back(l);
        }
    }
    out.scores = std::move(scores);
    return out;
}

inline OracleOutcome oracle_ai2(std::vector<OracleRow> rows, const std::vector<std::string>& labels, std::size_t j) {
    std::sort(rows.begin(), rows.end(), oracle_row_order);
    rows.resize(std::min(j, rows.size()));
    std::map<std::string, double> scores;
    for (const auto& l : labels) {
        scores[l] = 0.0;
    }
    for (const auto& r : rows) {
        scores[r.label] = std::max(scores[r.label], r.p);
    }
    return oracle_finish(labels, scores);
}

inline OracleOutcome oracle_maxentail(const std::vector<OracleRow>& rows, const std::vector<std::string>& labels,
                                      std::size_t k) {
    std::map<std::string, double> scores;
    for (const auto& l : labels) {
        std::vector<OracleRow> mine;
        for (const auto& r : rows) {
            if (r.label == l) {
                mine.push_back(r);
            }
        }
        std::sort(mine.begin(), mine.end(), oracle_row_order);
        mine.resize(std::min(k, mine.size()));
        double s = 0.0;
        for (const auto& r : mine) {
            s = std::max(s, r.p);
        }
        scores[l] = s;
    }
    return oracle_finish(labels, scores);
}

}  // namespace arcqa::testing
