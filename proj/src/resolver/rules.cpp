#include "arcqa/resolver/rules.hpp"

#include <algorithm>
#include <set>

#include "arcqa/error.hpp"

namespace arcqa::resolver {

namespace {

void check_inputs(const std::vector<Evidence>& evidence, const std::vector<std::string>& labels) {
    if (labels.empty()) {
        throw InvalidArgument("decision rule: at least one choice label required");
    }
    const std::set<std::string> known(labels.begin(), labels.end());
    if (known.size() != labels.size()) {
        throw InvalidArgument("decision rule: duplicate choice labels");
    }
    for (const auto& e : evidence) {
        if (known.count(e.choice_label) == 0) {
            throw InvalidArgument("decision rule: evidence for unknown choice '" + e.choice_label + "'");
        }
    }
}

bool retrieval_order(const Evidence& a, const Evidence& b) {
    if (a.retrieval_score != b.retrieval_score) {
        return a.retrieval_score > b.retrieval_score;
    }
    if (a.passage_doc_id != b.passage_doc_id) {
        return a.passage_doc_id < b.passage_doc_id;
    }
    return a.choice_label < b.choice_label;
}

std::vector<ChoiceScore> zero_scores(const std::vector<std::string>& labels) {
    std::vector<ChoiceScore> scores;
    for (const auto& l : labels) {
        scores.push_back({l, 0.0});
    }
    return scores;
}

void take_max(std::vector<ChoiceScore>& scores, const std::string& label, double p, std::vector<bool>& seen) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i].label == label) {
            scores[i].score = seen[i] ? std::max(scores[i].score, p) : p;
            seen[i] = true;
            return;
        }
    }
}

}  // namespace

double DecisionOutcome::score(std::string_view label) const {
    for (const auto& c : per_choice) {
        if (c.label == label) {
            return c.score;
        }
    }
    throw InvalidArgument("no score for choice '" + std::string(label) + "'");
}

DecisionOutcome outcome_from_scores(std::vector<ChoiceScore> scores) {
    if (scores.empty()) {
        throw InvalidArgument("decision rule: no choices to select from");
    }
    DecisionOutcome out;
    const auto best = std::max_element(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
                          return a.score < b.score;
                      })->score;
    for (const auto& c : scores) {
        if (c.score == best) {
            out.selected.push_back(c.label);
        }
    }
    out.per_choice = std::move(scores);
    return out;
}

DecisionOutcome ai2_rule(const std::vector<Evidence>& evidence, const std::vector<std::string>& all_labels,
                         std::size_t j) {
    if (j == 0) {
        throw InvalidArgument("ai2_rule: j must be >= 1");
    }
    check_inputs(evidence, all_labels);
    std::vector<Evidence> pool = evidence;
    const auto keep = std::min(j, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                      retrieval_order);
    auto scores = zero_scores(all_labels);
    std::vector<bool> seen(scores.size(), false);
    for (std::size_t i = 0; i < keep; ++i) {
        take_max(scores, pool[i].choice_label, pool[i].entail_prob, seen);
    }
    return outcome_from_scores(std::move(scores));
}

DecisionOutcome maxentail_topk(const std::vector<Evidence>& evidence,
                               const std::vector<std::string>& all_labels, std::size_t k) {
    if (k == 0) {
        throw InvalidArgument("maxentail_topk: k must be >= 1");
    }
    check_inputs(evidence, all_labels);
    auto scores = zero_scores(all_labels);
    std::vector<bool> seen(scores.size(), false);
    for (const auto& label : all_labels) {
        std::vector<Evidence> rows;
        for (const auto& e : evidence) {
            if (e.choice_label == label) {
                rows.push_back(e);
            }
        }
        const auto keep = std::min(k, rows.size());
        std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(keep), rows.end(),
                          retrieval_order);
        for (std::size_t i = 0; i < keep; ++i) {
            take_max(scores, label, rows[i].entail_prob, seen);
        }
    }
    return outcome_from_scores(std::move(scores));
}

ExamScore score_exam(const std::map<std::string, DecisionOutcome>& outcomes,
                     const std::map<std::string, std::string>& gold) {
    std::vector<std::string> missing;
    for (const auto& [id, _] : gold) {
        if (outcomes.count(id) == 0) {
            missing.push_back(id);
        }
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) {
            ids += (ids.empty() ? "" : ", ") + id;
        }
        throw InvalidArgument("score_exam: no prediction for question(s): " + ids);
    }
    ExamScore out;
    if (gold.empty()) {
        return out;
    }
    double total = 0.0;
    for (const auto& [id, answer] : gold) {
        const auto& sel = outcomes.at(id).selected;
        const bool hit = std::find(sel.begin(), sel.end(), answer) != sel.end();
        const double credit = hit ? 1.0 / static_cast<double>(sel.size()) : 0.0;
        out.credit[id] = credit;
        total += credit;
    }
    out.accuracy = total / static_cast<double>(gold.size());
    return out;
}

}  // namespace arcqa::resolver
