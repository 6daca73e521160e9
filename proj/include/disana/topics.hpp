#ifndef DISANA_TOPICS_HPP
#define DISANA_TOPICS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "disana/corpus.hpp"
#include "disana/seedex.hpp"
#include "disana/sentiment.hpp"

namespace disana::topics {

/// Document embedding; zero only when the document had no embeddable tokens.
/// Zero-vector documents are forced outliers downstream.
struct DocVector {
    std::string tweet_id;
    std::vector<double> values;

    bool is_zero() const {
        for (double v : values) {
            if (v != 0.0) return false;
        }
        return true;
    }
};

struct TopicModelConfig {
    int n_topics_target = 150;
    int min_cluster_size = 10;
    int reduced_dim = 5;
    int ngram_max = 2;
    double diversity = 1.0;
    unsigned random_seed = 0;
    std::set<std::string> stopwords; // no default list
};

struct EmbedResult {
    std::vector<DocVector> vectors; // aligned with the input record order
    std::vector<std::string> missing_ids; // precomputed strategy only
};

/// Mean of the word vectors of in-vocabulary tokens, length-normalized;
/// documents with no in-vocabulary tokens get the zero vector.
EmbedResult embed_docs_mean(const std::vector<corpus::TweetRecord>& records,
                            const seedex::EmbeddingTable& embeddings);

/// Reads vectors keyed by tweet id from a file with header "N D" and rows
/// "tweet_id v1 .. vD". Records without a row get the zero vector and are
/// reported in missing_ids; inconsistent dimensions are fatal.
EmbedResult embed_docs_precomputed(const std::vector<corpus::TweetRecord>& records,
                                   const std::string& path);

/// Deterministic principal-component projection to `reduced_dim`. Vectors
/// already at the target dimension pass through unchanged; zero vectors stay
/// zero. The seed parameter is accepted for interface stability; the
/// projection itself has no stochastic step.
std::vector<DocVector> reduce(const std::vector<DocVector>& vectors, int reduced_dim,
                              unsigned random_seed = 0);

/// Document -> topic id; -1 marks the outlier category. Total: one entry per
/// input document, aligned by index.
struct TopicAssignment {
    std::vector<int> topic_by_index;
    std::vector<std::string> ids; // tweet ids, aligned

    int topic_of(const std::string& tweet_id) const;
    int max_topic_id() const;
};

/// Density clustering with an explicit noise label: every non-outlier
/// cluster has at least min_cluster_size members; closest-centroid merging
/// caps the cluster count at n_topics_target. Topic ids are assigned by
/// descending cluster size.
TopicAssignment cluster(const std::vector<DocVector>& reduced, const TopicModelConfig& config);

struct Topic {
    int id = 0;
    std::size_t size = 0;
    std::vector<std::pair<std::string, double>> top_terms; // weight nonincreasing
    std::string label; // manual, may be empty
};

/// Class-based term weighting over unigrams and bigrams:
///   weight(t, c) = tf(t, c) * log(1 + A / f(t))
/// with tf the within-class relative frequency, f(t) the term count across
/// all classes and A the average term count per class. Top 10 terms per
/// topic after the diversity filter (diversity 1.0 skips any term sharing a
/// unigram with an already selected one).
std::vector<Topic> topic_terms(const TopicAssignment& assignment,
                               const std::vector<corpus::TweetRecord>& records,
                               const TopicModelConfig& config);

struct TopicRankRow {
    int rank = 0;
    int topic_id = 0;
    std::string label;
    std::size_t size = 0;
    double mean_rel = 0.0;
};

/// Frequency table sorted by size descending with mean REL sentiment.
std::vector<TopicRankRow> rank_topics(const TopicAssignment& assignment,
                                      const std::vector<Topic>& topics,
                                      const std::vector<sentiment::ScoredDoc>& scored);

/// Analyst-curated grouping of topics into themes plus optional manual
/// topic labels; loaded from a JSON config file.
struct ThemeMap {
    std::map<std::string, std::vector<int>> themes; // theme name -> topic ids
    std::map<int, std::string> labels;              // topic id -> manual label

    static ThemeMap load(const std::string& path);
};

struct ThemeSummaryRow {
    std::string theme;
    std::size_t size = 0;
    double mean_rel = 0.0;
};

struct ThemeBreakdown {
    std::vector<ThemeSummaryRow> summary; // size descending
    std::map<std::string, sentiment::DailySeries> count_series;
};

/// Per-theme daily tweet counts and totals; outliers and unmapped topics are
/// excluded. A theme map naming an unknown topic id is fatal.
ThemeBreakdown map_themes(const TopicAssignment& assignment, const ThemeMap& theme_map,
                          const std::vector<sentiment::ScoredDoc>& scored,
                          const sentiment::DateWindow& window);

} // namespace disana::topics

#endif
