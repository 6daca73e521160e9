#include "disana/relevance.hpp"

#include <unordered_set>

#include "disana/text.hpp"

namespace disana::relevance {

namespace {

std::vector<std::string> seed_term_set(const seedex::SeedList& seeds) {
    std::vector<std::string> terms;
    terms.reserve(seeds.terms.size() + 1);
    terms.push_back(seeds.query);
    for (const auto& t : seeds.terms) terms.push_back(t.lemma);
    return terms;
}

} // namespace

MatchResult match(const corpus::TweetRecord& rec, const seedex::SeedList& seeds,
                  const MatchOptions& options) {
    MatchResult result;
    result.tweet_id = rec.id;
    const auto terms = seed_term_set(seeds);

    std::vector<std::string> text_tokens;
    for (const auto& token : corpus::tokenize(rec.text)) {
        text_tokens.push_back(token.surface);
    }
    std::vector<std::string> hashtags;
    hashtags.reserve(rec.hashtags.size());
    for (const auto& tag : rec.hashtags) hashtags.push_back(text::to_lower(tag));

    if (options.substring) {
        for (const auto& term : terms) {
            for (const auto& surface : text_tokens) {
                if (surface.find(term) != std::string::npos) {
                    result.matched_terms.insert(term);
                    result.locations.insert(MatchLocation::text);
                    break;
                }
            }
            for (const auto& tag : hashtags) {
                if (tag.find(term) != std::string::npos) {
                    result.matched_terms.insert(term);
                    result.locations.insert(MatchLocation::hashtag);
                    break;
                }
            }
        }
        return result;
    }

    const std::unordered_set<std::string> token_set(text_tokens.begin(), text_tokens.end());
    const std::unordered_set<std::string> hashtag_set(hashtags.begin(), hashtags.end());
    for (const auto& term : terms) {
        if (token_set.count(term)) {
            result.matched_terms.insert(term);
            result.locations.insert(MatchLocation::text);
        }
        if (hashtag_set.count(term)) {
            result.matched_terms.insert(term);
            result.locations.insert(MatchLocation::hashtag);
        }
    }
    return result;
}

bool is_relevant(const MatchResult& m, const ExclusionRule& excl) {
    if (m.matched_terms.empty()) return false;
    for (const auto& term : m.matched_terms) {
        if (excl.terms.find(term) == excl.terms.end()) return true;
    }
    return false; // every matched term is an exclusion term
}

FilterResult filter_corpus(const std::vector<corpus::TweetRecord>& records,
                           const seedex::SeedList& seeds, const ExclusionRule& excl,
                           const MatchOptions& options) {
    FilterResult result;
    result.stats.total = records.size();
    for (const auto& rec : records) {
        const auto m = match(rec, seeds, options);
        if (m.matched_terms.empty()) continue;
        ++result.stats.matched;
        if (!is_relevant(m, excl)) {
            ++result.stats.excluded;
            continue;
        }
        result.relevant.push_back(rec);
    }
    result.stats.relevant = result.stats.matched - result.stats.excluded;
    return result;
}

} // namespace disana::relevance
