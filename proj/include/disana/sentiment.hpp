#ifndef DISANA_SENTIMENT_HPP
#define DISANA_SENTIMENT_HPP

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "disana/corpus.hpp"
#include "disana/date.hpp"

namespace disana::sentiment {

/// Term lists driving the scorer. Sentiment strengths are +2..+5 for
/// positive and -5..-2 for negative terms; boosters add one point of
/// magnitude to the following term, negators flip its sign.
struct SentimentLexicon {
    std::unordered_map<std::string, int> entries;
    std::unordered_set<std::string> boosters;
    std::unordered_set<std::string> negators;

    /// TSV columns: term, class in {sentiment, booster, negator}, strength
    /// (signed integer; blank for booster/negator rows).
    static SentimentLexicon load(const std::string& path);
};

/// Dual-polarity intensity: pos in 1..5, neg in -5..-1, both present for
/// every document. Rescaled values shift to 0..4 and -4..0.
struct SentimentScore {
    int pos = 1;
    int neg = -1;

    int pos_rescaled() const { return pos - 1; }
    int neg_rescaled() const { return neg + 1; }
    int rescaled_sum() const { return pos_rescaled() + neg_rescaled(); }

    bool operator==(const SentimentScore&) const = default;
};

enum class Label { positive, negative, neutral_mixed };

std::string label_name(Label l);

SentimentScore score(const std::vector<corpus::Token>& tokens, const SentimentLexicon& lexicon);
Label label(const SentimentScore& s);

enum class Metric { SUM, REL, POS, NEG, COUNT };

std::string metric_name(Metric m);

/// Contiguous date-indexed series, one value per calendar day. Days without
/// any record carry value 0 and are flagged.
struct DailySeries {
    Metric metric = Metric::SUM;
    Date begin;
    std::vector<double> values;
    std::vector<std::int64_t> counts; // records per day
    std::vector<Date> empty_days;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return Date{begin.days + static_cast<std::int32_t>(i)}; }
};

struct ScoredDoc {
    std::string id;
    std::int64_t created_at = 0;
    SentimentScore score;
};

struct DateWindow {
    Date begin;
    Date end; // inclusive
};

DailySeries aggregate(const std::vector<ScoredDoc>& docs, Metric metric,
                      const DateWindow& window);

/// CSV with columns date, value, count, empty_flag.
std::string format_series_csv(const DailySeries& series);
DailySeries parse_series_csv(const std::string& csv_text, Metric metric);

} // namespace disana::sentiment

#endif
