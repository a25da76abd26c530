#include "arcqa/question/question.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "json.hpp"

#include "arcqa/error.hpp"
#include "arcqa/text/tokenize.hpp"

namespace arcqa::question {

using nlohmann::json;

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           static_cast<unsigned char>(c) >= 0x80;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::string strip_question_mark(std::string_view s) {
    s = trim(s);
    while (!s.empty() && s.back() == '?') {
        s.remove_suffix(1);
        s = trim(s);
    }
    return std::string(s);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

const json& require(const json& obj, const char* field, const char* path) {
    if (!obj.is_object() || !obj.contains(field)) {
        throw ParseError(std::string("missing required field '") + path + "'");
    }
    return obj.at(field);
}

std::string require_string(const json& obj, const char* field, const char* path) {
    const auto& v = require(obj, field, path);
    if (!v.is_string()) {
        throw ParseError(std::string("field '") + path + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

void Question::validate() const {
    if (choices.size() < 2 || choices.size() > 5) {
        throw ParseError("question " + id + ": expected 2-5 choices, got " + std::to_string(choices.size()));
    }
    std::set<std::string> seen;
    for (const auto& c : choices) {
        if (!seen.insert(c.label).second) {
            throw ParseError("question " + id + ": duplicate choice label '" + c.label + "'");
        }
    }
    if (answer_key && seen.count(*answer_key) == 0) {
        throw ParseError("question " + id + ": answerKey '" + *answer_key + "' is not a choice label");
    }
}

std::vector<std::string> Question::labels() const {
    std::vector<std::string> out;
    for (const auto& c : choices) {
        out.push_back(c.label);
    }
    return out;
}

Question parse_question(std::string_view json_line) {
    json doc;
    try {
        doc = json::parse(json_line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    Question q;
    const auto& id = require(doc, "id", "id");
    q.id = id.is_string() ? id.get<std::string>() : id.dump();
    const auto& body = require(doc, "question", "question");
    q.stem = require_string(body, "stem", "question.stem");
    const auto& choices = require(body, "choices", "question.choices");
    if (!choices.is_array()) {
        throw ParseError("field 'question.choices' must be an array");
    }
    for (const auto& c : choices) {
        q.choices.push_back({require_string(c, "label", "question.choices[].label"),
                             require_string(c, "text", "question.choices[].text")});
    }
    if (doc.contains("answerKey") && !doc.at("answerKey").is_null()) {
        const auto& key = doc.at("answerKey");
        if (!key.is_string()) {
            throw ParseError("field 'answerKey' must be a string");
        }
        q.answer_key = key.get<std::string>();
    }
    q.validate();
    return q;
}

std::vector<Question> parse_questions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open question file " + path.string());
    }
    std::vector<Question> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        try {
            out.push_back(parse_question(line));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

SplitStem split_question(std::string_view stem) {
    stem = trim(stem);
    std::size_t last_boundary = std::string_view::npos;
    for (std::size_t i = 0; i + 1 < stem.size(); ++i) {
        const char c = stem[i];
        if ((c == '.' || c == '?' || c == '!') && is_space(stem[i + 1])) {
            last_boundary = i + 1;
        }
    }
    if (last_boundary == std::string_view::npos) {
        return {"", std::string(stem)};
    }
    return {std::string(trim(stem.substr(0, last_boundary))),
            std::string(trim(stem.substr(last_boundary)))};
}

std::string make_hypothesis(std::string_view sentence, std::string_view choice_text) {
    const std::string base = strip_question_mark(sentence);
    const std::string answer(trim(choice_text));

    // Rule 1: every blank marker.
    std::string filled;
    bool blank = false;
    for (std::size_t i = 0; i < base.size();) {
        std::size_t j = i;
        while (j < base.size() && base[j] == '_') {
            ++j;
        }
        if (j - i >= 3) {
            filled += answer;
            blank = true;
            i = j;
        } else if (j > i) {
            filled.append(base, i, j - i);
            i = j;
        } else {
            filled += base[i++];
        }
    }
    if (blank) {
        return strip_question_mark(filled);
    }

    // Rule 2: leftmost wh-word on word boundaries.
    static constexpr std::array<std::string_view, 9> kWhWords = {
        "what", "which", "who", "whom", "whose", "where", "when", "why", "how"};
    std::size_t i = 0;
    while (i < base.size()) {
        if (!is_alnum(base[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < base.size() && is_alnum(base[j])) {
            ++j;
        }
        const auto word = lower(std::string_view(base).substr(i, j - i));
        if (std::find(kWhWords.begin(), kWhWords.end(), word) != kWhWords.end()) {
            return strip_question_mark(base.substr(0, i) + answer + base.substr(j));
        }
        i = j;
    }

    // Rule 3: append.
    return strip_question_mark(base + " " + answer);
}

const std::string& HypothesisSet::hypothesis(std::string_view label) const {
    for (const auto& h : hypotheses) {
        if (h.label == label) {
            return h.text;
        }
    }
    throw InvalidArgument("no hypothesis for choice '" + std::string(label) + "'");
}

HypothesisSet build_hypotheses(const Question& q, bool split) {
    HypothesisSet out;
    std::string sentence = q.stem;
    if (split) {
        auto parts = split_question(q.stem);
        out.context_prefix = std::move(parts.context);
        sentence = std::move(parts.final_sentence);
    }
    for (const auto& c : q.choices) {
        out.hypotheses.push_back({c.label, make_hypothesis(sentence, c.text)});
    }
    return out;
}

QueryBundle build_queries(const Question& q, const std::vector<std::string>& selected_terms) {
    QueryBundle out;
    out.question_id = q.id;
    out.selected_terms = selected_terms;
    const auto prefix = text::join(selected_terms);
    for (const auto& c : q.choices) {
        out.per_choice_queries.push_back({c.label, prefix.empty() ? c.text : prefix + " " + c.text});
    }
    return out;
}

}  // namespace arcqa::question
