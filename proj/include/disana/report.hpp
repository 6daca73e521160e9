#ifndef DISANA_REPORT_HPP
#define DISANA_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disana/analytics.hpp"
#include "disana/corpus.hpp"
#include "disana/relevance.hpp"
#include "disana/seedex.hpp"
#include "disana/sentiment.hpp"
#include "disana/topics.hpp"

namespace disana::report {

/// Everything one run needs, loadable from a JSON file; command line flags
/// override file values. Relative paths resolve against the config file's
/// directory; DISANA_OUT_DIR overrides the output directory.
struct RunConfig {
    std::string corpus_path;
    corpus::TimeWindow window;
    std::string lang = "de";
    std::string query;
    seedex::ExpansionConfig expansion;
    std::vector<std::string> exclusion_terms = {"infektion"};
    bool substring_match = false;
    std::string lexicon_path;
    std::string lemma_table_path;
    std::string word_embeddings_path;
    std::string doc_embeddings_path;                     // for precomputed-file strategy
    std::string doc_embed_strategy = "mean-word-vector"; // or "precomputed-file"
    topics::TopicModelConfig topic_config;
    std::string theme_map_path; // optional
    std::string phases_rki_path;
    std::string phases_policy_path;
    std::string events_path;
    double peak_multiplier = 1.5;
    std::optional<double> changepoint_penalty; // default: 2 * variance * log(n)
    double alpha = 0.05;
    int alignment_window_days = 3;
    std::string out_dir = "out";
    unsigned random_seed = 0;

    static RunConfig load(const std::string& path);
    void validate() const;

    sentiment::DateWindow date_window() const;
};

struct SectionStatus {
    std::string name;
    bool written = false;
    std::string reason; // why skipped
};

struct TrendRow {
    std::string series;
    analytics::TrendResult result;
};

struct PeakRow {
    std::string series;
    analytics::Peak peak;
};

struct ChangePointRow {
    std::string series;
    std::size_t index = 0;
    Date date;
};

struct AlignmentRow {
    std::string series;
    analytics::PointKind kind = analytics::PointKind::peak;
    Date date;
    std::string phase_rki;
    std::string phase_policy;
    std::optional<Date> event_date;
    std::string event_desc;
    int distance_days = -1;
};

struct ReportBundle {
    seedex::SeedList seeds;
    relevance::FilterStats filter_stats;
    std::map<std::string, sentiment::DailySeries> metric_series; // sum, rel, pos, neg, count
    std::vector<topics::TopicRankRow> topic_table;
    std::vector<topics::Topic> topics;
    std::vector<topics::ThemeSummaryRow> theme_summary;
    std::map<std::string, sentiment::DailySeries> theme_series;
    std::vector<TrendRow> trends;
    std::vector<PeakRow> peaks;
    std::vector<ChangePointRow> change_points;
    std::vector<AlignmentRow> alignment;
    std::vector<std::string> plot_files;
    std::vector<SectionStatus> sections;
    std::string out_dir;
};

/// Individual pipeline stages; each reads the previous stage's cached
/// outputs from the configured output directory and writes its own.
void stage_expand(const RunConfig& config);
void stage_filter(const RunConfig& config);
void stage_sentiment(const RunConfig& config);
void stage_topics(const RunConfig& config);
void stage_analytics(const RunConfig& config);
void stage_report(const RunConfig& config);

/// Runs all stages in order and assembles the bundle. Identical config and
/// seed reproduce identical outputs.
ReportBundle run(const RunConfig& config);

/// Writes one bundle section as CSV under the output directory and returns
/// the path. Unknown section names are an error.
std::string emit_csv(const ReportBundle& bundle, const std::string& section);

} // namespace disana::report

#endif
