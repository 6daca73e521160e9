#ifndef DISANA_RELEVANCE_HPP
#define DISANA_RELEVANCE_HPP

#include <set>
#include <string>
#include <vector>

#include "disana/corpus.hpp"
#include "disana/seedex.hpp"

namespace disana::relevance {

enum class MatchLocation { text, hashtag };

struct MatchResult {
    std::string tweet_id;
    std::set<std::string> matched_terms;
    std::set<MatchLocation> locations;
};

struct ExclusionRule {
    std::set<std::string> terms = {"infektion"}; // lowercase
};

struct FilterStats {
    std::size_t total = 0;
    std::size_t matched = 0;
    std::size_t excluded = 0;
    std::size_t relevant = 0; // matched - excluded
};

struct FilterResult {
    std::vector<corpus::TweetRecord> relevant; // input order preserved
    FilterStats stats;
};

struct MatchOptions {
    /// Token-exact matching by default; substring matching would silently
    /// match German compounds, so it is opt-in.
    bool substring = false;
};

/// Seed terms (query included) compared case-insensitively against the text
/// tokens and whole hashtags of the record.
MatchResult match(const corpus::TweetRecord& rec, const seedex::SeedList& seeds,
                  const MatchOptions& options = {});

/// A record is relevant when it matched at least one term that is not an
/// exclusion term; records whose every match is an exclusion term are out.
bool is_relevant(const MatchResult& m, const ExclusionRule& excl);

FilterResult filter_corpus(const std::vector<corpus::TweetRecord>& records,
                           const seedex::SeedList& seeds, const ExclusionRule& excl,
                           const MatchOptions& options = {});

} // namespace disana::relevance

#endif
