#include <doctest.h>

#include "disana/relevance.hpp"
#include "test_support.hpp"

using namespace disana;

namespace {

corpus::TweetRecord make_record(const std::string& id, const std::string& text,
                                std::vector<std::string> hashtags = {}) {
    corpus::TweetRecord rec;
    rec.id = id;
    rec.created_at = 0;
    rec.lang = "de";
    rec.text = text;
    rec.hashtags = std::move(hashtags);
    return rec;
}

seedex::SeedList make_seeds(const std::string& query, std::vector<std::string> terms) {
    seedex::SeedList seeds;
    seeds.query = query;
    for (const auto& t : terms) {
        seeds.terms.push_back({t, corpus::PosClass::noun, 1, 0.9});
    }
    return seeds;
}

} // namespace

TEST_CASE("match finds seed terms in text tokens") {
    const auto seeds = make_seeds("impfung", {});
    const auto m = relevance::match(make_record("1", "die impfung hilft"), seeds);
    CHECK(m.matched_terms == std::set<std::string>{"impfung"});
    CHECK(m.locations == std::set<relevance::MatchLocation>{relevance::MatchLocation::text});
}

TEST_CASE("match finds seed terms in hashtags") {
    const auto seeds = make_seeds("impfung", {"impfpflicht"});
    const auto m = relevance::match(make_record("1", "jetzt reicht es", {"impfpflicht"}), seeds);
    CHECK(m.matched_terms == std::set<std::string>{"impfpflicht"});
    CHECK(m.locations == std::set<relevance::MatchLocation>{relevance::MatchLocation::hashtag});
}

TEST_CASE("match is token-exact by default") {
    const auto seeds = make_seeds("impfung", {});
    const auto m = relevance::match(make_record("1", "impfungen sind ein thema"), seeds);
    CHECK(m.matched_terms.empty());
    CHECK(m.locations.empty());

    relevance::MatchOptions substring;
    substring.substring = true;
    const auto m2 = relevance::match(make_record("1", "impfungen sind ein thema"), seeds,
                                     substring);
    CHECK(m2.matched_terms == std::set<std::string>{"impfung"});
}

TEST_CASE("is_relevant excludes documents matching only exclusion terms") {
    relevance::ExclusionRule excl; // defaults to {"infektion"}
    relevance::MatchResult only_excluded;
    only_excluded.matched_terms = {"infektion"};
    CHECK_FALSE(relevance::is_relevant(only_excluded, excl));

    relevance::MatchResult mixed;
    mixed.matched_terms = {"infektion", "impfung"};
    CHECK(relevance::is_relevant(mixed, excl));

    relevance::MatchResult none;
    CHECK_FALSE(relevance::is_relevant(none, excl));
}

TEST_CASE("filter_corpus keeps the stats invariant on a hand-counted fixture") {
    const auto seeds = make_seeds("impfung", {"impfstoff", "infektion"});
    relevance::ExclusionRule excl;

    std::vector<corpus::TweetRecord> records;
    records.push_back(make_record("1", "die impfung wirkt"));
    records.push_back(make_record("2", "impfstoff geliefert"));
    records.push_back(make_record("3", "impfung und infektion"));
    records.push_back(make_record("4", "nur infektion hier")); // excluded
    records.push_back(make_record("5", "", {"impfung"}));
    records.push_back(make_record("6", "impfstoff da", {"impfung"}));
    records.push_back(make_record("7", "gar nichts"));
    records.push_back(make_record("8", "wetter heute"));
    records.push_back(make_record("9", "noch ein text"));
    records.push_back(make_record("10", "letzter text"));

    const auto result = relevance::filter_corpus(records, seeds, excl);
    CHECK(result.stats.total == 10);
    CHECK(result.stats.matched == 6);
    CHECK(result.stats.excluded == 1);
    CHECK(result.stats.relevant == 5);
    CHECK(result.stats.relevant == result.stats.matched - result.stats.excluded);
    REQUIRE(result.relevant.size() == 5);
    CHECK(result.relevant[0].id == "1"); // input order preserved
    CHECK(result.relevant[4].id == "6");
}

TEST_CASE("filter_corpus on an empty corpus yields zero stats") {
    const auto seeds = make_seeds("impfung", {});
    const auto result = relevance::filter_corpus({}, seeds, relevance::ExclusionRule{});
    CHECK(result.stats.total == 0);
    CHECK(result.stats.matched == 0);
    CHECK(result.stats.excluded == 0);
    CHECK(result.stats.relevant == 0);
}

TEST_CASE("filtering is idempotent and monotone in the term sets") {
    const auto seeds = make_seeds("impfung", {"impfstoff"});
    relevance::ExclusionRule excl;
    std::vector<corpus::TweetRecord> records;
    for (int i = 0; i < 30; ++i) {
        std::string text = "text " + std::to_string(i);
        if (i % 2 == 0) text += " impfung";
        if (i % 3 == 0) text += " impfstoff";
        if (i % 5 == 0) text += " infektion";
        records.push_back(make_record(std::to_string(i), text));
    }
    const auto once = relevance::filter_corpus(records, seeds, excl);
    const auto twice = relevance::filter_corpus(once.relevant, seeds, excl);
    CHECK(twice.relevant.size() == once.relevant.size());
    CHECK(twice.stats.excluded == 0);

    // adding a seed term never shrinks the relevant set
    auto more_seeds = seeds;
    more_seeds.terms.push_back({"infektion", corpus::PosClass::noun, 1, 0.9});
    const auto more = relevance::filter_corpus(records, more_seeds, excl);
    CHECK(more.stats.relevant >= once.stats.relevant);

    // adding an exclusion term never grows it
    auto more_excl = excl;
    more_excl.terms.insert("impfstoff");
    const auto fewer = relevance::filter_corpus(records, more_seeds, more_excl);
    CHECK(fewer.stats.relevant <= more.stats.relevant);

    // every relevant record keeps a non-excluded match
    for (const auto& rec : fewer.relevant) {
        const auto m = relevance::match(rec, more_seeds);
        bool has_clean = false;
        for (const auto& term : m.matched_terms) {
            has_clean |= more_excl.terms.find(term) == more_excl.terms.end();
        }
        CHECK(has_clean);
    }
}
