#include "disana/seedex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "disana/csv.hpp"
#include "disana/errors.hpp"
#include "disana/io.hpp"
#include "disana/text.hpp"

namespace disana::seedex {

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path);

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("embedding file " + path + ": missing header");
    }
    std::istringstream header(line);
    std::size_t vocab = 0, dim = 0;
    if (!(header >> vocab >> dim) || dim == 0) {
        throw ValidationError("embedding file " + path + ": header must be 'V D'");
    }

    EmbeddingTable table;
    table.dim = dim;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        if (!(row >> token)) {
            throw ValidationError("embedding file " + path + " line " + std::to_string(lineno) +
                                  ": empty row");
        }
        std::vector<double> vec;
        vec.reserve(dim);
        double v = 0.0;
        while (row >> v) vec.push_back(v);
        if (vec.size() != dim) {
            throw ValidationError("embedding file " + path + " line " + std::to_string(lineno) +
                                  ": expected " + std::to_string(dim) + " values, got " +
                                  std::to_string(vec.size()));
        }
        for (double x : vec) {
            if (!std::isfinite(x)) {
                throw ValidationError("embedding file " + path + " line " +
                                      std::to_string(lineno) + ": non-finite component");
            }
        }
        const std::string key = text::to_lower(token);
        if (key.empty()) {
            throw ValidationError("embedding file " + path + " line " + std::to_string(lineno) +
                                  ": empty token");
        }
        if (!table.vectors.emplace(key, std::move(vec)).second) {
            ++table.duplicate_rows;
            continue;
        }
        if (table.vectors.size() > vocab) {
            throw ValidationError("embedding file " + path +
                                  ": more rows than the declared vocabulary size " +
                                  std::to_string(vocab));
        }
    }
    return table;
}

std::optional<double> try_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ValidationError("cosine: vector lengths differ (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    const auto sim = try_cosine(a, b);
    if (!sim) throw ValidationError("cosine undefined for a zero vector");
    return *sim;
}

bool contains_query_token(const corpus::TweetRecord& rec, const std::string& query_lower) {
    for (const auto& token : corpus::tokenize(rec.text)) {
        if (token.surface == query_lower) return true;
    }
    for (const auto& tag : rec.hashtags) {
        if (text::to_lower(tag) == query_lower) return true;
    }
    return false;
}

std::vector<CandidateTerm> collect_candidates(const std::vector<corpus::TweetRecord>& docs_with_query,
                                              const std::string& query,
                                              const corpus::LemmaTable& table,
                                              const ExpansionConfig& config) {
    const std::string query_lower = text::to_lower(query);
    const std::string query_lemma = corpus::lemmatize(corpus::Token{query_lower, query_lower, false}, table).lemma;

    struct Info {
        corpus::PosClass pos;
        std::size_t docs;
    };
    std::map<std::string, Info> counts; // ordered for deterministic output

    for (const auto& rec : docs_with_query) {
        std::set<std::string> seen_in_doc;
        auto consider = [&](const corpus::Token& raw) {
            const auto token = corpus::lemmatize(raw, table);
            const auto* entry = table.find(token.surface);
            const corpus::PosClass pos = entry ? entry->pos : corpus::PosClass::noun;
            if (config.pos_classes.find(pos) == config.pos_classes.end()) return;
            if (token.lemma == query_lemma) return;
            if (!seen_in_doc.insert(token.lemma).second) return;
            auto [it, inserted] = counts.emplace(token.lemma, Info{pos, 0});
            ++it->second.docs;
        };
        for (const auto& token : corpus::tokenize(rec.text)) consider(token);
        for (const auto& tag : rec.hashtags) {
            const std::string t = text::to_lower(tag);
            consider(corpus::Token{t, t, true});
        }
    }

    std::vector<CandidateTerm> out;
    out.reserve(counts.size());
    for (const auto& [lemma, info] : counts) {
        out.push_back(CandidateTerm{lemma, info.pos, info.docs, 0.0});
    }
    return out;
}

SeedList expand(const std::string& query, std::vector<CandidateTerm> candidates,
                const EmbeddingTable& embeddings, const ExpansionConfig& config,
                ExpansionDiagnostics* diag) {
    const std::string query_lower = text::to_lower(query);
    const auto* query_vec = embeddings.find(query_lower);
    if (!query_vec) {
        throw ValidationError("query '" + query_lower + "' has no embedding");
    }

    ExpansionDiagnostics local;
    local.candidates_total = candidates.size();

    std::vector<CandidateTerm> kept;
    for (auto& cand : candidates) {
        const auto* vec = embeddings.find(cand.lemma);
        if (!vec) {
            ++local.dropped_no_embedding;
            continue;
        }
        const auto sim = try_cosine(*query_vec, *vec);
        if (!sim || *sim < config.min_similarity) {
            ++local.dropped_below_threshold;
            continue;
        }
        cand.similarity = *sim;
        kept.push_back(std::move(cand));
    }

    std::sort(kept.begin(), kept.end(), [](const CandidateTerm& a, const CandidateTerm& b) {
        if (a.cooccurrence != b.cooccurrence) return a.cooccurrence > b.cooccurrence;
        return a.lemma < b.lemma;
    });
    if (kept.size() > static_cast<std::size_t>(config.top_k)) {
        kept.resize(static_cast<std::size_t>(config.top_k));
    }

    if (diag) *diag = local;

    SeedList seeds;
    seeds.query = query_lower;
    seeds.terms = std::move(kept);
    seeds.config = config;
    return seeds;
}

std::string format_seed_list_tsv(const SeedList& seeds) {
    std::string out = "term\tpos_class\tcooccurrence\tsimilarity\n";
    out += seeds.query + "\tnoun\t" + std::to_string(seeds.query_doc_count) + "\t1\n";
    for (const auto& term : seeds.terms) {
        out += term.lemma + '\t' + corpus::pos_class_name(term.pos_class) + '\t' +
               std::to_string(term.cooccurrence) + '\t' + csv::format_double(term.similarity) +
               '\n';
    }
    return out;
}

SeedList parse_seed_list_tsv(const std::string& tsv) {
    SeedList seeds;
    std::istringstream in(tsv);
    std::string line;
    bool header = true;
    bool first_row = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream row(line);
        std::string term, pos_str, cooc_str, sim_str;
        if (!std::getline(row, term, '\t') || !std::getline(row, pos_str, '\t') ||
            !std::getline(row, cooc_str, '\t') || !std::getline(row, sim_str)) {
            throw ValidationError("bad seed list row: '" + line + "'");
        }
        const auto pos = corpus::parse_pos_class(pos_str);
        if (!pos) throw ValidationError("bad pos class in seed list: '" + pos_str + "'");
        CandidateTerm cand;
        cand.lemma = term;
        cand.pos_class = *pos;
        cand.cooccurrence = static_cast<std::size_t>(std::stoull(cooc_str));
        cand.similarity = csv::parse_double(sim_str);
        if (first_row) {
            seeds.query = term;
            seeds.query_doc_count = cand.cooccurrence;
            first_row = false;
        } else {
            seeds.terms.push_back(std::move(cand));
        }
    }
    if (first_row) throw ValidationError("seed list has no rows");
    return seeds;
}

} // namespace disana::seedex
