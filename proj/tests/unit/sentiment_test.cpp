#include <doctest.h>

#include <algorithm>
#include <random>

#include "disana/corpus.hpp"
#include "disana/errors.hpp"
#include "disana/sentiment.hpp"
#include "test_support.hpp"

using namespace disana;

namespace {

sentiment::SentimentLexicon bundled_lexicon() {
    return sentiment::SentimentLexicon::load(testsupport::repo_path("data/lexicon_de.tsv"));
}

sentiment::SentimentScore score_text(const std::string& text,
                                     const sentiment::SentimentLexicon& lex) {
    return sentiment::score(corpus::tokenize(text), lex);
}

} // namespace

TEST_CASE("score defaults to the neutral floor") {
    const auto lex = bundled_lexicon();
    const auto s = score_text("wetter bericht heute", lex);
    CHECK(s.pos == 1);
    CHECK(s.neg == -1);
    CHECK(s.pos_rescaled() == 0);
    CHECK(s.neg_rescaled() == 0);
}

TEST_CASE("score picks the strongest polarity per side") {
    const auto lex = bundled_lexicon();
    // bundled entries: super +3, schrecklich -4
    const auto s = score_text("das war super aber auch schrecklich", lex);
    CHECK(s.pos == 3);
    CHECK(s.neg == -4);
    CHECK(sentiment::label(s) == sentiment::Label::negative);
}

TEST_CASE("a negator flips the following sentiment term") {
    const auto lex = bundled_lexicon();
    const auto s = score_text("nicht super", lex);
    CHECK(s.pos == 1);
    CHECK(s.neg == -3);

    const auto s2 = score_text("nicht schrecklich", lex);
    CHECK(s2.pos == 4);
    CHECK(s2.neg == -1);
}

TEST_CASE("a booster adds one point of magnitude, capped at five") {
    const auto lex = bundled_lexicon();
    CHECK(score_text("sehr super", lex).pos == 4);
    CHECK(score_text("sehr schrecklich", lex).neg == -5);
    // katastrophe is already -5
    CHECK(score_text("sehr katastrophe", lex).neg == -5);
    // negation scope is exactly one token: "nicht sehr gut" boosts, does not flip
    CHECK(score_text("nicht sehr gut", lex).pos == 3);
}

TEST_CASE("labels follow the intensity comparison") {
    CHECK(sentiment::label({3, -1}) == sentiment::Label::positive);
    CHECK(sentiment::label({2, -2}) == sentiment::Label::neutral_mixed);
    CHECK(sentiment::label({1, -4}) == sentiment::Label::negative);
    CHECK(sentiment::label({1, -1}) == sentiment::Label::neutral_mixed);
}

TEST_CASE("label is invariant under rescaling") {
    for (int pos = 1; pos <= 5; ++pos) {
        for (int neg = -5; neg <= -1; ++neg) {
            const sentiment::SentimentScore s{pos, neg};
            const int pr = s.pos_rescaled();
            const int nr = s.neg_rescaled();
            sentiment::Label rescaled_label;
            if (pr > -nr) rescaled_label = sentiment::Label::positive;
            else if (-nr > pr) rescaled_label = sentiment::Label::negative;
            else rescaled_label = sentiment::Label::neutral_mixed;
            CHECK(sentiment::label(s) == rescaled_label);
        }
    }
}

TEST_CASE("lexicon loader rejects bad rows") {
    testsupport::TempDir dir("lex");
    const std::string dup = dir.file("dup.tsv");
    testsupport::write_file(dup, "gut\tsentiment\t2\ngut\tbooster\n");
    CHECK_THROWS_AS(sentiment::SentimentLexicon::load(dup), ValidationError);

    const std::string range = dir.file("range.tsv");
    testsupport::write_file(range, "extrem\tsentiment\t7\n");
    CHECK_THROWS_AS(sentiment::SentimentLexicon::load(range), ValidationError);

    const std::string one = dir.file("one.tsv");
    testsupport::write_file(one, "gut\tsentiment\t1\n");
    CHECK_THROWS_AS(sentiment::SentimentLexicon::load(one), ValidationError);
}

namespace {

sentiment::ScoredDoc make_doc(const std::string& id, const std::string& day, int pos, int neg) {
    sentiment::ScoredDoc doc;
    doc.id = id;
    doc.created_at = *parse_timestamp(day + "T12:00:00Z");
    doc.score = {pos, neg};
    return doc;
}

} // namespace

TEST_CASE("aggregate computes the documented example values") {
    const sentiment::DateWindow window{*parse_date("2021-03-01"), *parse_date("2021-03-03")};
    std::vector<sentiment::ScoredDoc> docs{
        make_doc("a", "2021-03-01", 3, -1),
        make_doc("b", "2021-03-03", 3, -1),
        make_doc("c", "2021-03-03", 1, -4),
    };

    const auto sum = sentiment::aggregate(docs, sentiment::Metric::SUM, window);
    const auto rel = sentiment::aggregate(docs, sentiment::Metric::REL, window);
    const auto pos = sentiment::aggregate(docs, sentiment::Metric::POS, window);
    const auto neg = sentiment::aggregate(docs, sentiment::Metric::NEG, window);
    const auto count = sentiment::aggregate(docs, sentiment::Metric::COUNT, window);

    // day 1: one record (3,-1) -> rescaled (2,0)
    CHECK(sum.values[0] == 2.0);
    CHECK(rel.values[0] == 2.0);
    CHECK(pos.values[0] == 1.0);
    CHECK(neg.values[0] == 0.0);
    CHECK(count.values[0] == 1.0);
    // day 2: empty
    CHECK(sum.values[1] == 0.0);
    CHECK(rel.values[1] == 0.0);
    CHECK(count.values[1] == 0.0);
    REQUIRE(sum.empty_days.size() == 1);
    CHECK(format_date(sum.empty_days[0]) == "2021-03-02");
    // day 3: (3,-1) and (1,-4) -> 2 + (-3) = -1, REL -0.5
    CHECK(sum.values[2] == -1.0);
    CHECK(rel.values[2] == -0.5);
    CHECK(pos.values[2] == 1.0);
    CHECK(neg.values[2] == 1.0);
    CHECK(count.values[2] == 2.0);
}

TEST_CASE("aggregate invariants on random inputs") {
    std::mt19937 rng(2021);
    const sentiment::DateWindow window{*parse_date("2021-01-01"), *parse_date("2021-01-14")};
    std::vector<sentiment::ScoredDoc> docs;
    for (int i = 0; i < 300; ++i) {
        const int day = static_cast<int>(rng() % 14) + 1;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "2021-01-%02d", day);
        docs.push_back(make_doc("d" + std::to_string(i), buf,
                                static_cast<int>(rng() % 5) + 1,
                                -(static_cast<int>(rng() % 5) + 1)));
    }

    const auto sum = sentiment::aggregate(docs, sentiment::Metric::SUM, window);
    const auto rel = sentiment::aggregate(docs, sentiment::Metric::REL, window);
    const auto pos = sentiment::aggregate(docs, sentiment::Metric::POS, window);
    const auto neg = sentiment::aggregate(docs, sentiment::Metric::NEG, window);
    const auto count = sentiment::aggregate(docs, sentiment::Metric::COUNT, window);

    double total_sum = 0.0, total_count = 0.0, weighted_rel = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        CHECK(pos.values[i] + neg.values[i] <= count.values[i]);
        CHECK(pos.values[i] >= 0.0);
        CHECK(neg.values[i] >= 0.0);
        CHECK(count.values[i] == static_cast<double>(count.counts[i]));
        total_sum += sum.values[i];
        total_count += count.values[i];
        weighted_rel += rel.values[i] * count.values[i];
    }
    CHECK(weighted_rel == doctest::Approx(total_sum).epsilon(1e-9));
    CHECK(total_count == 300.0);

    // permuting records leaves every series identical
    std::vector<sentiment::ScoredDoc> shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto sum2 = sentiment::aggregate(shuffled, sentiment::Metric::SUM, window);
    const auto rel2 = sentiment::aggregate(shuffled, sentiment::Metric::REL, window);
    CHECK(sum2.values == sum.values);
    CHECK(rel2.values == rel.values);
}

TEST_CASE("series CSV round trip preserves values exactly") {
    const sentiment::DateWindow window{*parse_date("2021-05-01"), *parse_date("2021-05-05")};
    std::vector<sentiment::ScoredDoc> docs{
        make_doc("a", "2021-05-01", 2, -5), make_doc("b", "2021-05-01", 4, -1),
        make_doc("c", "2021-05-03", 1, -2), make_doc("d", "2021-05-05", 5, -5),
        make_doc("e", "2021-05-05", 3, -3), make_doc("f", "2021-05-05", 2, -2),
    };
    const auto rel = sentiment::aggregate(docs, sentiment::Metric::REL, window);
    const auto csv_text = sentiment::format_series_csv(rel);
    const auto parsed = sentiment::parse_series_csv(csv_text, sentiment::Metric::REL);
    CHECK(parsed.begin == rel.begin);
    CHECK(parsed.values == rel.values);
    CHECK(parsed.counts == rel.counts);
    CHECK(parsed.empty_days.size() == rel.empty_days.size());
}

TEST_CASE("aggregate rejects documents outside the window") {
    const sentiment::DateWindow window{*parse_date("2021-05-01"), *parse_date("2021-05-02")};
    std::vector<sentiment::ScoredDoc> docs{make_doc("a", "2021-06-01", 2, -2)};
    CHECK_THROWS_AS(sentiment::aggregate(docs, sentiment::Metric::SUM, window), ValidationError);
}
