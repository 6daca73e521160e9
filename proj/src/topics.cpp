#include "disana/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "disana/errors.hpp"
#include "disana/io.hpp"
#include "disana/text.hpp"

namespace disana::topics {

using nlohmann::json;

EmbedResult embed_docs_mean(const std::vector<corpus::TweetRecord>& records,
                            const seedex::EmbeddingTable& embeddings) {
    EmbedResult result;
    result.vectors.reserve(records.size());
    for (const auto& rec : records) {
        std::vector<double> acc(embeddings.dim, 0.0);
        std::size_t hits = 0;
        auto add = [&](const std::string& surface) {
            if (const auto* vec = embeddings.find(surface)) {
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (*vec)[i];
                ++hits;
            }
        };
        for (const auto& token : corpus::tokenize(rec.text)) add(token.surface);
        for (const auto& tag : rec.hashtags) add(text::to_lower(tag));
        if (hits > 0) {
            double norm_sq = 0.0;
            for (auto& v : acc) {
                v /= static_cast<double>(hits);
                norm_sq += v * v;
            }
            if (norm_sq > 0.0) {
                const double norm = std::sqrt(norm_sq);
                for (auto& v : acc) v /= norm;
            }
        }
        result.vectors.push_back(DocVector{rec.id, std::move(acc)});
    }
    return result;
}

EmbedResult embed_docs_precomputed(const std::vector<corpus::TweetRecord>& records,
                                   const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open document embedding file: " + path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("document embedding file " + path + ": missing header");
    }
    std::istringstream header(line);
    std::size_t count = 0, dim = 0;
    if (!(header >> count >> dim) || dim == 0) {
        throw ValidationError("document embedding file " + path + ": header must be 'N D'");
    }
    std::unordered_map<std::string, std::vector<double>> by_id;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string id;
        row >> id;
        std::vector<double> vec;
        vec.reserve(dim);
        double v;
        while (row >> v) vec.push_back(v);
        if (vec.size() != dim) {
            throw ValidationError("document embedding file " + path + " line " +
                                  std::to_string(lineno) + ": expected " + std::to_string(dim) +
                                  " values, got " + std::to_string(vec.size()));
        }
        by_id.emplace(std::move(id), std::move(vec));
    }

    EmbedResult result;
    result.vectors.reserve(records.size());
    for (const auto& rec : records) {
        const auto it = by_id.find(rec.id);
        if (it == by_id.end()) {
            result.missing_ids.push_back(rec.id);
            result.vectors.push_back(DocVector{rec.id, std::vector<double>(dim, 0.0)});
        } else {
            result.vectors.push_back(DocVector{rec.id, it->second});
        }
    }
    return result;
}

namespace {

/// Cyclic Jacobi eigen decomposition of a symmetric matrix. Deterministic;
/// fine for the moderate dimensions document embeddings use here.
void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& eigenvalues,
                  std::vector<std::vector<double>>& eigenvectors) {
    const std::size_t n = a.size();
    eigenvectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) eigenvectors[i][i] = 1.0;

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
    }
    if (scale == 0.0) scale = 1.0;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off <= 1e-30 * scale * scale) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = eigenvectors[k][p];
                    const double vkq = eigenvectors[k][q];
                    eigenvectors[k][p] = c * vkp - s * vkq;
                    eigenvectors[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i][i];
}

} // namespace

std::vector<DocVector> reduce(const std::vector<DocVector>& vectors, int reduced_dim,
                              unsigned /*random_seed*/) {
    if (reduced_dim < 1) throw ValidationError("reduced_dim must be at least 1");
    if (vectors.empty()) return {};
    const std::size_t dim = vectors.front().values.size();
    for (const auto& v : vectors) {
        if (v.values.size() != dim) {
            throw ValidationError("document vectors have inconsistent dimensions");
        }
    }
    if (static_cast<std::size_t>(reduced_dim) > dim) {
        throw ValidationError("reduced_dim exceeds the embedding dimension");
    }
    if (static_cast<std::size_t>(reduced_dim) == dim) return vectors;

    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (!vectors[i].is_zero()) nonzero.push_back(i);
    }
    if (nonzero.size() < static_cast<std::size_t>(reduced_dim) + 1) {
        throw ValidationError("too few documents for reduction to " +
                              std::to_string(reduced_dim) +
                              " dimensions; lower reduced_dim");
    }

    std::vector<double> mean(dim, 0.0);
    for (std::size_t i : nonzero) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += vectors[i].values[d];
    }
    for (auto& m : mean) m /= static_cast<double>(nonzero.size());

    std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i : nonzero) {
        for (std::size_t r = 0; r < dim; ++r) {
            const double xr = vectors[i].values[r] - mean[r];
            for (std::size_t c = r; c < dim; ++c) {
                cov[r][c] += xr * (vectors[i].values[c] - mean[c]);
            }
        }
    }
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            cov[r][c] /= static_cast<double>(nonzero.size());
            cov[c][r] = cov[r][c];
        }
    }

    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    jacobi_eigen(cov, eigenvalues, eigenvectors);

    std::vector<std::size_t> order(dim);
    for (std::size_t i = 0; i < dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (eigenvalues[a] != eigenvalues[b]) return eigenvalues[a] > eigenvalues[b];
        return a < b;
    });

    // fixed sign: the component with the largest magnitude is positive
    std::vector<std::vector<double>> basis;
    for (int k = 0; k < reduced_dim; ++k) {
        std::vector<double> axis(dim);
        for (std::size_t d = 0; d < dim; ++d) axis[d] = eigenvectors[d][order[k]];
        std::size_t arg = 0;
        for (std::size_t d = 1; d < dim; ++d) {
            if (std::abs(axis[d]) > std::abs(axis[arg])) arg = d;
        }
        if (axis[arg] < 0.0) {
            for (auto& v : axis) v = -v;
        }
        basis.push_back(std::move(axis));
    }

    std::vector<DocVector> out;
    out.reserve(vectors.size());
    for (const auto& doc : vectors) {
        DocVector r;
        r.tweet_id = doc.tweet_id;
        r.values.assign(reduced_dim, 0.0);
        if (!doc.is_zero()) {
            for (int k = 0; k < reduced_dim; ++k) {
                double dot = 0.0;
                for (std::size_t d = 0; d < dim; ++d) {
                    dot += (doc.values[d] - mean[d]) * basis[k][d];
                }
                r.values[k] = dot;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

int TopicAssignment::topic_of(const std::string& tweet_id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == tweet_id) return topic_by_index[i];
    }
    throw ValidationError("tweet id not in assignment: " + tweet_id);
}

int TopicAssignment::max_topic_id() const {
    int max_id = -1;
    for (int t : topic_by_index) max_id = std::max(max_id, t);
    return max_id;
}

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

TopicAssignment cluster(const std::vector<DocVector>& reduced, const TopicModelConfig& config) {
    if (config.min_cluster_size < 2) throw ValidationError("min_cluster_size must be >= 2");
    if (config.n_topics_target < 1) throw ValidationError("n_topics_target must be >= 1");

    TopicAssignment assignment;
    assignment.ids.reserve(reduced.size());
    for (const auto& doc : reduced) assignment.ids.push_back(doc.tweet_id);
    assignment.topic_by_index.assign(reduced.size(), -1);

    std::vector<std::size_t> points; // indices of embeddable documents
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (!reduced[i].is_zero()) points.push_back(i);
    }
    const std::size_t min_pts = static_cast<std::size_t>(config.min_cluster_size);
    if (points.size() < min_pts) return assignment; // nothing can be dense

    const std::size_t m = points.size();
    std::vector<double> dist(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const double d =
                std::sqrt(sq_distance(reduced[points[a]].values, reduced[points[b]].values));
            dist[a * m + b] = d;
            dist[b * m + a] = d;
        }
    }

    // data-driven radius: high quantile of the distances to each point's
    // (min_cluster_size - 1)-th nearest neighbour, so fringe points of a
    // dense region still fall inside some core's neighbourhood
    std::vector<double> kdist(m);
    {
        std::vector<double> row(m - 1);
        for (std::size_t a = 0; a < m; ++a) {
            std::size_t w = 0;
            for (std::size_t b = 0; b < m; ++b) {
                if (b != a) row[w++] = dist[a * m + b];
            }
            std::nth_element(row.begin(), row.begin() + (min_pts - 2), row.end());
            kdist[a] = row[min_pts - 2];
        }
    }
    std::vector<double> sorted_kdist = kdist;
    std::sort(sorted_kdist.begin(), sorted_kdist.end());
    const double eps = sorted_kdist[((m - 1) * 9) / 10];

    // DBSCAN over the embeddable points, expansion in index order
    std::vector<std::vector<std::size_t>> neighbors(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (dist[a * m + b] <= eps) neighbors[a].push_back(b); // includes a itself
        }
    }
    std::vector<int> labels(m, -1);
    int next_cluster = 0;
    for (std::size_t a = 0; a < m; ++a) {
        if (labels[a] != -1 || neighbors[a].size() < min_pts) continue;
        const int cid = next_cluster++;
        labels[a] = cid;
        std::vector<std::size_t> frontier{a};
        while (!frontier.empty()) {
            const std::size_t p = frontier.back();
            frontier.pop_back();
            if (neighbors[p].size() < min_pts) continue; // border point, do not expand
            for (std::size_t q : neighbors[p]) {
                if (labels[q] == -1) {
                    labels[q] = cid;
                    frontier.push_back(q);
                }
            }
        }
    }

    // cap the cluster count by merging closest centroids
    if (next_cluster > config.n_topics_target) {
        const std::size_t dim = reduced[points[0]].values.size();
        struct Centroid {
            std::vector<double> sum;
            std::size_t count = 0;
            bool alive = true;
        };
        std::vector<Centroid> centroids(next_cluster);
        for (auto& c : centroids) c.sum.assign(dim, 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            if (labels[a] < 0) continue;
            auto& c = centroids[labels[a]];
            for (std::size_t d = 0; d < dim; ++d) c.sum[d] += reduced[points[a]].values[d];
            ++c.count;
        }
        auto centroid_of = [&](int c) {
            std::vector<double> v = centroids[c].sum;
            for (auto& x : v) x /= static_cast<double>(centroids[c].count);
            return v;
        };
        int alive = next_cluster;
        std::vector<int> remap(next_cluster);
        for (int i = 0; i < next_cluster; ++i) remap[i] = i;
        while (alive > config.n_topics_target) {
            double best = std::numeric_limits<double>::infinity();
            int ba = -1, bb = -1;
            for (int i = 0; i < next_cluster; ++i) {
                if (!centroids[i].alive) continue;
                const auto ci = centroid_of(i);
                for (int j = i + 1; j < next_cluster; ++j) {
                    if (!centroids[j].alive) continue;
                    const double d = sq_distance(ci, centroid_of(j));
                    if (d < best) {
                        best = d;
                        ba = i;
                        bb = j;
                    }
                }
            }
            for (std::size_t d = 0; d < dim; ++d) centroids[ba].sum[d] += centroids[bb].sum[d];
            centroids[ba].count += centroids[bb].count;
            centroids[bb].alive = false;
            for (int i = 0; i < next_cluster; ++i) {
                if (remap[i] == bb) remap[i] = ba;
            }
            --alive;
        }
        for (auto& l : labels) {
            if (l >= 0) l = remap[l];
        }
    }

    // final ids ordered by size descending, first-member index breaking ties
    std::map<int, std::pair<std::size_t, std::size_t>> stats; // label -> (size, first index)
    for (std::size_t a = 0; a < m; ++a) {
        if (labels[a] < 0) continue;
        auto [it, inserted] = stats.emplace(labels[a], std::make_pair(std::size_t{0}, a));
        ++it->second.first;
    }
    std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> ordered(stats.begin(),
                                                                             stats.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
        if (x.second.first != y.second.first) return x.second.first > y.second.first;
        return x.second.second < y.second.second;
    });
    std::map<int, int> final_id;
    for (std::size_t i = 0; i < ordered.size(); ++i) final_id[ordered[i].first] = static_cast<int>(i);

    for (std::size_t a = 0; a < m; ++a) {
        assignment.topic_by_index[points[a]] = labels[a] < 0 ? -1 : final_id[labels[a]];
    }
    return assignment;
}

namespace {

struct TermCounts {
    std::map<std::string, std::vector<std::int64_t>> per_class; // term -> counts by class
    std::vector<std::int64_t> class_totals;
};

std::vector<std::string> doc_terms(const corpus::TweetRecord& rec, const TopicModelConfig& config) {
    std::vector<std::string> unigrams;
    for (const auto& token : corpus::tokenize(rec.text)) unigrams.push_back(token.surface);

    const auto is_stop = [&](const std::string& t) { return config.stopwords.count(t) > 0; };

    std::vector<std::string> terms;
    for (const auto& u : unigrams) {
        if (!is_stop(u)) terms.push_back(u);
    }
    if (config.ngram_max >= 2) {
        for (std::size_t i = 0; i + 1 < unigrams.size(); ++i) {
            if (is_stop(unigrams[i]) || is_stop(unigrams[i + 1])) continue;
            terms.push_back(unigrams[i] + ' ' + unigrams[i + 1]);
        }
    }
    for (const auto& tag : rec.hashtags) {
        const std::string t = text::to_lower(tag);
        if (!is_stop(t)) terms.push_back(t);
    }
    return terms;
}

} // namespace

std::vector<Topic> topic_terms(const TopicAssignment& assignment,
                               const std::vector<corpus::TweetRecord>& records,
                               const TopicModelConfig& config) {
    if (assignment.topic_by_index.size() != records.size()) {
        throw ValidationError("assignment does not cover the corpus");
    }
    const int n_classes = assignment.max_topic_id() + 1;
    std::vector<Topic> topics;
    if (n_classes == 0) return topics;

    TermCounts counts;
    counts.class_totals.assign(n_classes, 0);
    std::vector<std::size_t> sizes(n_classes, 0);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const int cls = assignment.topic_by_index[i];
        if (cls < 0) continue;
        ++sizes[cls];
        for (const auto& term : doc_terms(records[i], config)) {
            auto [it, inserted] = counts.per_class.emplace(term, std::vector<std::int64_t>());
            if (inserted) it->second.assign(n_classes, 0);
            ++it->second[cls];
            ++counts.class_totals[cls];
        }
    }

    std::int64_t grand_total = 0;
    for (auto t : counts.class_totals) grand_total += t;
    const double avg_per_class = static_cast<double>(grand_total) / n_classes;

    for (int cls = 0; cls < n_classes; ++cls) {
        if (sizes[cls] == 0) {
            io::log_line("topics", "skipping empty topic", {{"topic", std::to_string(cls)}});
            continue;
        }
        Topic topic;
        topic.id = cls;
        topic.size = sizes[cls];

        std::vector<std::pair<std::string, double>> weighted;
        const double total = static_cast<double>(counts.class_totals[cls]);
        if (total > 0) {
            for (const auto& [term, by_class] : counts.per_class) {
                if (by_class[cls] == 0) continue;
                double f = 0.0;
                for (auto c : by_class) f += static_cast<double>(c);
                const double tf = static_cast<double>(by_class[cls]) / total;
                weighted.emplace_back(term, tf * std::log(1.0 + avg_per_class / f));
            }
        }
        std::sort(weighted.begin(), weighted.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });

        std::set<std::string> used_unigrams;
        for (const auto& [term, weight] : weighted) {
            if (topic.top_terms.size() >= 10) break;
            std::vector<std::string> parts;
            std::istringstream ss(term);
            std::string part;
            while (ss >> part) parts.push_back(part);
            if (config.diversity >= 1.0) {
                bool clash = false;
                for (const auto& p : parts) {
                    if (used_unigrams.count(p)) {
                        clash = true;
                        break;
                    }
                }
                if (clash) continue;
            }
            for (const auto& p : parts) used_unigrams.insert(p);
            topic.top_terms.emplace_back(term, weight);
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

std::vector<TopicRankRow> rank_topics(const TopicAssignment& assignment,
                                      const std::vector<Topic>& topics,
                                      const std::vector<sentiment::ScoredDoc>& scored) {
    std::unordered_map<std::string, const sentiment::ScoredDoc*> by_id;
    for (const auto& doc : scored) by_id.emplace(doc.id, &doc);

    std::map<int, std::pair<std::size_t, std::int64_t>> acc; // topic -> (n, sum of rescaled)
    for (std::size_t i = 0; i < assignment.ids.size(); ++i) {
        const int cls = assignment.topic_by_index[i];
        if (cls < 0) continue;
        const auto it = by_id.find(assignment.ids[i]);
        if (it == by_id.end()) {
            throw ValidationError("no sentiment score for document " + assignment.ids[i]);
        }
        auto& [n, sum] = acc[cls];
        ++n;
        sum += it->second->score.rescaled_sum();
    }

    std::map<int, const Topic*> topic_by_id;
    for (const auto& t : topics) topic_by_id.emplace(t.id, &t);

    std::vector<TopicRankRow> rows;
    for (const auto& [cls, ns] : acc) {
        TopicRankRow row;
        row.topic_id = cls;
        row.size = ns.first;
        row.mean_rel = ns.first == 0 ? 0.0
                                     : static_cast<double>(ns.second) /
                                           static_cast<double>(ns.first);
        const auto it = topic_by_id.find(cls);
        if (it != topic_by_id.end()) {
            row.label = it->second->label;
            if (row.label.empty()) {
                std::string joined;
                for (std::size_t k = 0; k < it->second->top_terms.size() && k < 3; ++k) {
                    if (k) joined += '_';
                    joined += it->second->top_terms[k].first;
                }
                row.label = joined;
            }
        }
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const TopicRankRow& a, const TopicRankRow& b) {
        if (a.size != b.size) return a.size > b.size;
        return a.topic_id < b.topic_id;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);
    return rows;
}

ThemeMap ThemeMap::load(const std::string& path) {
    json doc = json::parse(io::read_text_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ValidationError("theme map " + path + ": not a JSON object");
    }
    ThemeMap map;
    if (doc.contains("themes")) {
        if (!doc["themes"].is_object()) throw ValidationError("theme map: 'themes' must be an object");
        for (const auto& [name, ids] : doc["themes"].items()) {
            if (!ids.is_array()) throw ValidationError("theme map: theme '" + name + "' must list topic ids");
            std::vector<int> topic_ids;
            for (const auto& id : ids) {
                if (!id.is_number_integer()) {
                    throw ValidationError("theme map: non-integer topic id under '" + name + "'");
                }
                topic_ids.push_back(id.get<int>());
            }
            map.themes.emplace(name, std::move(topic_ids));
        }
    }
    if (doc.contains("labels")) {
        if (!doc["labels"].is_object()) throw ValidationError("theme map: 'labels' must be an object");
        for (const auto& [key, value] : doc["labels"].items()) {
            if (!value.is_string()) throw ValidationError("theme map: label for topic " + key + " must be a string");
            map.labels.emplace(std::stoi(key), value.get<std::string>());
        }
    }
    // one theme per topic
    std::map<int, std::string> seen;
    for (const auto& [name, ids] : map.themes) {
        for (int id : ids) {
            const auto [it, inserted] = seen.emplace(id, name);
            if (!inserted) {
                throw ValidationError("theme map: topic " + std::to_string(id) +
                                      " appears in both '" + it->second + "' and '" + name + "'");
            }
        }
    }
    return map;
}

ThemeBreakdown map_themes(const TopicAssignment& assignment, const ThemeMap& theme_map,
                          const std::vector<sentiment::ScoredDoc>& scored,
                          const sentiment::DateWindow& window) {
    const int max_id = assignment.max_topic_id();
    for (const auto& [name, ids] : theme_map.themes) {
        for (int id : ids) {
            if (id < 0 || id > max_id) {
                throw ValidationError("theme '" + name + "' references unknown topic id " +
                                      std::to_string(id));
            }
        }
    }

    std::map<int, std::string> theme_of_topic;
    for (const auto& [name, ids] : theme_map.themes) {
        for (int id : ids) theme_of_topic.emplace(id, name);
    }

    std::unordered_map<std::string, const sentiment::ScoredDoc*> by_id;
    for (const auto& doc : scored) by_id.emplace(doc.id, &doc);

    std::map<std::string, std::vector<sentiment::ScoredDoc>> theme_docs;
    for (const auto& [name, ids] : theme_map.themes) theme_docs[name]; // themes with no docs still emit
    for (std::size_t i = 0; i < assignment.ids.size(); ++i) {
        const int cls = assignment.topic_by_index[i];
        if (cls < 0) continue;
        const auto theme_it = theme_of_topic.find(cls);
        if (theme_it == theme_of_topic.end()) continue; // unmapped topic
        const auto doc_it = by_id.find(assignment.ids[i]);
        if (doc_it == by_id.end()) {
            throw ValidationError("no sentiment score for document " + assignment.ids[i]);
        }
        theme_docs[theme_it->second].push_back(*doc_it->second);
    }

    ThemeBreakdown breakdown;
    for (const auto& [name, docs] : theme_docs) {
        ThemeSummaryRow row;
        row.theme = name;
        row.size = docs.size();
        std::int64_t sum = 0;
        for (const auto& d : docs) sum += d.score.rescaled_sum();
        row.mean_rel = docs.empty() ? 0.0 : static_cast<double>(sum) / static_cast<double>(docs.size());
        breakdown.summary.push_back(row);
        breakdown.count_series.emplace(
            name, sentiment::aggregate(docs, sentiment::Metric::COUNT, window));
    }
    std::sort(breakdown.summary.begin(), breakdown.summary.end(),
              [](const ThemeSummaryRow& a, const ThemeSummaryRow& b) {
                  if (a.size != b.size) return a.size > b.size;
                  return a.theme < b.theme;
              });
    return breakdown;
}

} // namespace disana::topics
