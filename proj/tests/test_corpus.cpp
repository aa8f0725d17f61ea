#include <doctest.h>

#include "debsum/corpus.hpp"
#include "debsum/error.hpp"
#include "debsum/lexicon.hpp"
#include "test_util.hpp"

using namespace debsum;
using nlohmann::json;

namespace {

json one_comment(int sentences, const std::string& cid = "c1") {
    json s = json::array();
    for (int i = 1; i <= sentences; ++i) {
        s.push_back({{"id", cid + "-s" + std::to_string(i)}, {"position", i}, {"text", "Sentence " + std::to_string(i) + "."}});
    }
    return {{"topics", {{{"id", "t1"}, {"title", "Topic"}, {"comments", {{{"id", cid}, {"side", "agree"}, {"sentences", s}}}}}}}};
}

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
    CHECK(tokenize("Global warming is REAL.") == std::vector<std::string>{"global", "warming", "is", "real"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("sea-level rise, 2°C") == std::vector<std::string>{"sea-level", "rise", "2", "c"});
    CHECK(tokenize("-edge- a--b") == std::vector<std::string>{"edge", "a", "b"});
    CHECK(tokenize("Café CO2") == std::vector<std::string>{"café", "co2"});
}

TEST_CASE("token offsets index the source bytes") {
    const std::string text = "Sea ice, again";
    for (const auto& span : tokenize_with_offsets(text)) {
        std::string slice = text.substr(span.begin, span.end - span.begin);
        for (auto& ch : slice) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        CHECK(slice == span.token);
    }
}

TEST_CASE("selection count is ceil of the ratio, at least one") {
    CHECK(selection_count(10) == 2);
    CHECK(selection_count(3) == 1);
    CHECK(selection_count(5) == 1);
    CHECK(selection_count(6) == 2);
    CHECK(selection_count(1) == 1);
    CHECK(selection_count(11) == 3);
}

TEST_CASE("corpus parsing and validation") {
    auto topics = parse_corpus(one_comment(3));
    REQUIRE(topics.size() == 1);
    CHECK(topics[0].comments[0].sentences[2].tokens == std::vector<std::string>{"sentence", "3"});
    CHECK(parse_corpus(corpus_to_json(topics)) == topics);

    json empty = {{"topics", {{{"id", "t1"}, {"title", "x"}, {"comments", json::array()}}}}};
    CHECK_THROWS_AS(parse_corpus(empty), ValidationError);

    auto gap = one_comment(2);
    gap["topics"][0]["comments"][0]["sentences"][1]["position"] = 3;
    CHECK_THROWS_AS(parse_corpus(gap), ValidationError);

    auto side = one_comment(1);
    side["topics"][0]["comments"][0]["side"] = "neutral";
    CHECK_THROWS_AS(parse_corpus(side), ValidationError);

    auto dup = one_comment(2);
    dup["topics"][0]["comments"][0]["sentences"][1]["id"] = "c1-s1";
    CHECK_THROWS_AS(parse_corpus(dup), ValidationError);

    CHECK_THROWS_AS(parse_corpus(json{{"nope", 1}}), ValidationError);
}

TEST_CASE("gold annotations") {
    const auto corpus = parse_corpus(one_comment(10));
    json ok = {{"annotations", {{{"annotator_id", "a"}, {"comment_id", "c1"}, {"selected", {"c1-s1", "c1-s4"}}}}}};
    auto gold = parse_gold(ok, corpus);
    CHECK(gold.annotations.size() == 1);
    CHECK(gold.warnings.empty());

    const auto small = parse_corpus(one_comment(3));
    json one = {{"annotations", {{{"annotator_id", "a"}, {"comment_id", "c1"}, {"selected", {"c1-s2"}}}}}};
    CHECK(parse_gold(one, small).warnings.empty());

    json off = {{"annotations", {{{"annotator_id", "a"}, {"comment_id", "c1"}, {"selected", {"c1-s1"}}}}}};
    CHECK(parse_gold(off, corpus).warnings.size() == 1);

    json dangling = {{"annotations", {{{"annotator_id", "a"}, {"comment_id", "c1"}, {"selected", {"zz"}}}}}};
    CHECK_THROWS_AS(parse_gold(dangling, corpus), ValidationError);

    json twice = ok;
    twice["annotations"].push_back(ok["annotations"][0]);
    CHECK_THROWS_AS(parse_gold(twice, corpus), ValidationError);
}

TEST_CASE("file loading errors map to config and validation errors") {
    testutil::TempDir dir;
    CHECK_THROWS_AS(load_corpus(dir / "missing.json"), ConfigError);
    CHECK_THROWS_AS(load_corpus(testutil::write_file(dir / "bad.json", "{not json")), ValidationError);
    CHECK_THROWS_AS(read_lexicon_lines(dir / "missing.txt"), ConfigError);
    testutil::write_file(dir / "lex.txt", "# comment\n\n  However \nthus\n");
    CHECK(read_lexicon_lines(dir / "lex.txt") == std::vector<std::string>{"However", "thus"});
    CHECK(load_token_set(dir / "lex.txt") == std::set<std::string>{"however", "thus"});
    CHECK(normalize_term("  Global   WARMING ") == "global warming");
}
