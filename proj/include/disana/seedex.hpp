#ifndef DISANA_SEEDEX_HPP
#define DISANA_SEEDEX_HPP

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "disana/corpus.hpp"

namespace disana::seedex {

/// Word vectors in fasttext text format: header "V D", rows "token v1 .. vD".
struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;
    std::size_t duplicate_rows = 0; // first occurrence wins

    const std::vector<double>* find(const std::string& token_lower) const {
        const auto it = vectors.find(token_lower);
        return it == vectors.end() ? nullptr : &it->second;
    }
};

EmbeddingTable load_embeddings(const std::string& path);

/// dot(a,b) / (|a| |b|); throws ValidationError on length mismatch or a
/// zero vector (callers treat undefined similarity as below any threshold).
double cosine(const std::vector<double>& a, const std::vector<double>& b);
std::optional<double> try_cosine(const std::vector<double>& a, const std::vector<double>& b);

struct ExpansionConfig {
    double min_similarity = 0.6;
    int top_k = 30;
    std::set<corpus::PosClass> pos_classes = {corpus::PosClass::verb, corpus::PosClass::adj,
                                              corpus::PosClass::noun, corpus::PosClass::propn};
};

struct CandidateTerm {
    std::string lemma;
    corpus::PosClass pos_class = corpus::PosClass::noun;
    std::size_t cooccurrence = 0; // documents containing both query and lemma
    double similarity = 0.0;
};

struct SeedList {
    std::string query;                // lowercase query keyword
    std::size_t query_doc_count = 0;  // documents the query itself occurs in
    std::vector<CandidateTerm> terms; // sorted by cooccurrence desc, lemma asc
    ExpansionConfig config;
};

struct ExpansionDiagnostics {
    std::size_t candidates_total = 0;
    std::size_t dropped_no_embedding = 0;
    std::size_t dropped_below_threshold = 0;
};

/// True when the query occurs token-exact (case-insensitive) in the text
/// tokens or hashtags of the record.
bool contains_query_token(const corpus::TweetRecord& rec, const std::string& query_lower);

/// Collects lemmatized candidate terms from documents already known to
/// contain the query. Co-occurrence counts documents, not instances; the
/// query's own lemma is excluded.
std::vector<CandidateTerm> collect_candidates(const std::vector<corpus::TweetRecord>& docs_with_query,
                                              const std::string& query,
                                              const corpus::LemmaTable& table,
                                              const ExpansionConfig& config);

/// Similarity-filters and ranks candidates into the final seed list.
SeedList expand(const std::string& query, std::vector<CandidateTerm> candidates,
                const EmbeddingTable& embeddings, const ExpansionConfig& config,
                ExpansionDiagnostics* diag = nullptr);

/// TSV with columns term, pos_class, cooccurrence, similarity; the query
/// itself heads the list with similarity 1.
std::string format_seed_list_tsv(const SeedList& seeds);
SeedList parse_seed_list_tsv(const std::string& tsv);

} // namespace disana::seedex

#endif
