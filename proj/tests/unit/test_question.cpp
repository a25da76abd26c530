#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "arcqa/error.hpp"
#include "arcqa/question/question.hpp"
#include "arcqa/text/tokenize.hpp"
#include "support/paths.hpp"

using namespace arcqa;
using namespace arcqa::question;

namespace {

Question make_q(std::string stem, std::vector<std::string> texts) {
    Question q;
    q.id = "q";
    q.stem = std::move(stem);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        q.choices.push_back({std::string(1, static_cast<char>('A' + i)), texts[i]});
    }
    return q;
}

std::string squash(const std::string& s) {
    std::istringstream in(s);
    std::string w, out;
    while (in >> w) {
        out += (out.empty() ? "" : " ") + w;
    }
    return out;
}

}  // namespace

TEST_CASE("parse_question") {
    const auto q = parse_question(
        R"({"id":"x1","question":{"stem":"Which gas?","choices":[{"label":"A","text":"a"},{"label":"B","text":"b"},)"
        R"({"label":"C","text":"c"},{"label":"D","text":"d"}]},"answerKey":"C"})");
    CHECK(q.id == "x1");
    CHECK(q.answer_key == "C");
    CHECK(q.choices.size() == 4);
    CHECK(q.labels() == std::vector<std::string>{"A", "B", "C", "D"});

    CHECK_THROWS_AS(parse_question(R"({"id":"x","question":{"stem":"s","choices":[{"label":"A","text":"a"},{"label":"A","text":"b"}]}})"),
                    ParseError);
    CHECK_THROWS_WITH_AS(parse_question(R"({"id":"x","question":{"choices":[]}})"), doctest::Contains("stem"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_question(R"({"question":{"stem":"s","choices":[]}})"), doctest::Contains("id"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_question(R"({"id":"x","question":{"stem":"s","choices":[{"label":"A"}]}})"),
                         doctest::Contains("text"), ParseError);
    CHECK_THROWS_AS(parse_question(R"({"id":"x","question":{"stem":"s","choices":[{"label":"A","text":"a"},{"label":"B","text":"b"}]},"answerKey":"E"})"),
                    ParseError);
    CHECK_THROWS_AS(parse_question("not json"), ParseError);
    const auto no_key = parse_question(
        R"({"id":"x","question":{"stem":"s","choices":[{"label":"A","text":"a"},{"label":"B","text":"b"}]}})");
    CHECK_FALSE(no_key.answer_key.has_value());
}

TEST_CASE("parse_questions files") {
    const auto dir = testing::scratch_dir("questions");
    { std::ofstream(dir / "empty.jsonl"); }
    CHECK(parse_questions(dir / "empty.jsonl").empty());
    {
        std::ofstream out(dir / "bad.jsonl");
        out << R"({"id":"x","question":{"stem":"s","choices":[{"label":"A","text":"a"},{"label":"B","text":"b"}]}})"
            << "\n\n{broken\n";
    }
    CHECK_THROWS_WITH_AS(parse_questions(dir / "bad.jsonl"), doctest::Contains(":3"), ParseError);
    CHECK_THROWS_AS(parse_questions(dir / "missing.jsonl"), IoError);
    std::filesystem::remove_all(dir);

    const auto planted = parse_questions(testing::fixture("planted_questions.jsonl"));
    CHECK(planted.size() == 20);
}

TEST_CASE("split_question") {
    CHECK(split_question("Water boils. What causes this?") == SplitStem{"Water boils.", "What causes this?"});
    CHECK(split_question("Which gas do plants absorb?") == SplitStem{"", "Which gas do plants absorb?"});
    const auto three = split_question("One fact. Two facts! Which is true?");
    CHECK(three.context == "One fact. Two facts!");
    CHECK(three.final_sentence == "Which is true?");
    CHECK(split_question("Version 1.5 is out").final_sentence == "Version 1.5 is out");

    std::mt19937_64 rng(6);
    const std::vector<std::string> pieces = {"alpha", "beta.", "gamma?", "delta!", "x.y", "  ", "e"};
    for (int round = 0; round < 300; ++round) {
        std::string stem;
        for (std::size_t i = 0, n = 1 + rng() % 8; i < n; ++i) {
            stem += pieces[rng() % pieces.size()] + " ";
        }
        const auto s = split_question(stem);
        CHECK(squash(s.context + " " + s.final_sentence) == squash(stem));
        CHECK(split_question(s.final_sentence).final_sentence == s.final_sentence);
    }
}

TEST_CASE("make_hypothesis rules") {
    CHECK(make_hypothesis("Water boils at ___ degrees.", "100") == "Water boils at 100 degrees.");
    CHECK(make_hypothesis("Which gas do plants absorb?", "carbon dioxide") == "carbon dioxide gas do plants absorb");
    CHECK(make_hypothesis("Plants make food from sunlight", "true") == "Plants make food from sunlight true");
    CHECK(make_hypothesis("Somewhat odd, what is it?", "x") == "Somewhat odd, x is it");
    CHECK(make_hypothesis("The _____ is where, and which?", "y") == "The y is where, and which");

    std::mt19937_64 rng(8);
    const std::vector<std::string> pieces = {"what", "Which", "___", "__", "plants", "?", "how", "water", "?? "};
    for (int round = 0; round < 500; ++round) {
        std::string s;
        for (std::size_t i = 0, n = rng() % 7; i < n; ++i) {
            s += pieces[rng() % pieces.size()] + (rng() % 2 ? " " : "");
        }
        const bool blank = s.find("___") != std::string::npos;
        const auto h = make_hypothesis(s, "ans");
        if (!h.empty()) {
            CHECK(h.back() != '?');
        }
        if (blank) {
            CHECK(h.find("___") == std::string::npos);
        }
    }
}

TEST_CASE("build_hypotheses") {
    const auto one = make_q("Which gas do plants absorb?", {"oxygen", "carbon dioxide"});
    CHECK(build_hypotheses(one, true) == build_hypotheses(one, false));
    CHECK(build_hypotheses(one, false).hypotheses.size() == 2);
    CHECK(build_hypotheses(one, false).context_prefix.empty());
    CHECK(build_hypotheses(one, false).hypothesis("B") == "carbon dioxide gas do plants absorb");
    CHECK_THROWS_AS((void)build_hypotheses(one, false).hypothesis("Z"), InvalidArgument);

    const auto two = make_q("Leaves are green. Which gas do plants absorb?", {"oxygen", "neon", "argon"});
    const auto split = build_hypotheses(two, true);
    CHECK(split.context_prefix == "Leaves are green.");
    CHECK(split.hypothesis("A") == "oxygen gas do plants absorb");
    const auto full = build_hypotheses(two, false);
    CHECK(full.context_prefix.empty());
    CHECK(full.hypothesis("A") == "Leaves are green. oxygen gas do plants absorb");
    CHECK(full.hypotheses.size() == 3);
}

TEST_CASE("build_queries") {
    const auto q = make_q("Which gas do plants absorb?", {"oxygen", "carbon dioxide"});
    const auto b = build_queries(q, {"gas", "plants"});
    REQUIRE(b.per_choice_queries.size() == 2);
    CHECK(b.per_choice_queries[0] == LabeledText{"A", "gas plants oxygen"});
    CHECK(b.per_choice_queries[1] == LabeledText{"B", "gas plants carbon dioxide"});
    CHECK(build_queries(make_q("s", {"only"}), {"t"}).per_choice_queries.size() == 1);
    CHECK(build_queries(q, {"gas", "gas"}).per_choice_queries[0].text == "gas gas oxygen");
    CHECK(build_queries(q, {}).per_choice_queries[1].text == "carbon dioxide");
    CHECK(build_queries(q, {"plants", "gas"}).selected_terms == std::vector<std::string>{"plants", "gas"});
}
