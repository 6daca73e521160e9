#include "disana/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "disana/csv.hpp"
#include "disana/errors.hpp"
#include "disana/io.hpp"
#include "disana/plot.hpp"
#include "disana/text.hpp"

namespace disana::report {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string resolve_path(const fs::path& base_dir, const std::string& path) {
    if (path.empty()) return path;
    const fs::path p(path);
    if (p.is_absolute()) return path;
    return (base_dir / p).lexically_normal().string();
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

std::string theme_series_filename(const std::string& theme) {
    std::string slug;
    for (char c : theme) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!slug.empty() && slug.back() != '_') {
            slug.push_back('_');
        }
    }
    while (!slug.empty() && slug.back() == '_') slug.pop_back();
    return "theme_series_" + (slug.empty() ? "unnamed" : slug) + ".csv";
}

} // namespace

sentiment::DateWindow RunConfig::date_window() const {
    return sentiment::DateWindow{date_of(window.begin), date_of(window.end)};
}

RunConfig RunConfig::load(const std::string& path) {
    json doc = json::parse(io::read_text_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ValidationError("config " + path + ": not a JSON object");
    }
    const fs::path base = fs::path(path).parent_path();

    RunConfig config;
    const auto get_string = [&](const char* key, std::string& into, bool is_path) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_string()) throw ValidationError(std::string("config: '") + key + "' must be a string");
        into = doc[key].get<std::string>();
        if (is_path) into = resolve_path(base, into);
    };
    get_string("corpus", config.corpus_path, true);
    get_string("lang", config.lang, false);
    get_string("query", config.query, false);
    get_string("lexicon", config.lexicon_path, true);
    get_string("lemma_table", config.lemma_table_path, true);
    get_string("word_embeddings", config.word_embeddings_path, true);
    get_string("doc_embeddings", config.doc_embeddings_path, true);
    get_string("doc_embed_strategy", config.doc_embed_strategy, false);
    get_string("theme_map", config.theme_map_path, true);
    get_string("phases_rki", config.phases_rki_path, true);
    get_string("phases_policy", config.phases_policy_path, true);
    get_string("events", config.events_path, true);
    get_string("out_dir", config.out_dir, true);

    if (doc.contains("window")) {
        const auto& w = doc["window"];
        if (!w.is_object() || !w.contains("begin") || !w.contains("end")) {
            throw ValidationError("config: 'window' needs 'begin' and 'end'");
        }
        const auto begin = parse_timestamp(w["begin"].get<std::string>());
        const auto end = parse_timestamp(w["end"].get<std::string>());
        if (!begin || !end) throw ValidationError("config: window timestamps must be ISO-8601");
        config.window.begin = *begin;
        config.window.end = *end;
    }
    if (doc.contains("expansion")) {
        const auto& e = doc["expansion"];
        if (e.contains("min_similarity")) config.expansion.min_similarity = e["min_similarity"].get<double>();
        if (e.contains("top_k")) config.expansion.top_k = e["top_k"].get<int>();
        if (e.contains("pos_classes")) {
            config.expansion.pos_classes.clear();
            for (const auto& p : e["pos_classes"]) {
                const auto pos = corpus::parse_pos_class(p.get<std::string>());
                if (!pos) throw ValidationError("config: unknown pos class '" + p.get<std::string>() + "'");
                config.expansion.pos_classes.insert(*pos);
            }
        }
    }
    if (doc.contains("exclusion_terms")) {
        config.exclusion_terms.clear();
        for (const auto& t : doc["exclusion_terms"]) {
            config.exclusion_terms.push_back(text::to_lower(t.get<std::string>()));
        }
    }
    if (doc.contains("substring_match")) config.substring_match = doc["substring_match"].get<bool>();
    if (doc.contains("topics")) {
        const auto& t = doc["topics"];
        if (t.contains("n_topics_target")) config.topic_config.n_topics_target = t["n_topics_target"].get<int>();
        if (t.contains("min_cluster_size")) config.topic_config.min_cluster_size = t["min_cluster_size"].get<int>();
        if (t.contains("reduced_dim")) config.topic_config.reduced_dim = t["reduced_dim"].get<int>();
        if (t.contains("ngram_max")) config.topic_config.ngram_max = t["ngram_max"].get<int>();
        if (t.contains("diversity")) config.topic_config.diversity = t["diversity"].get<double>();
        if (t.contains("stopwords")) {
            for (const auto& s : t["stopwords"]) {
                config.topic_config.stopwords.insert(text::to_lower(s.get<std::string>()));
            }
        }
        if (t.contains("stopwords_file")) {
            const std::string sw = resolve_path(base, t["stopwords_file"].get<std::string>());
            if (!fs::exists(sw)) {
                throw ValidationError("config: stopwords_file not found: " + sw);
            }
            for (const auto& line : io::read_lines(sw)) {
                if (!line.empty()) config.topic_config.stopwords.insert(text::to_lower(line));
            }
        }
    }
    if (doc.contains("peak_multiplier")) config.peak_multiplier = doc["peak_multiplier"].get<double>();
    if (doc.contains("changepoint_penalty")) config.changepoint_penalty = doc["changepoint_penalty"].get<double>();
    if (doc.contains("alpha")) config.alpha = doc["alpha"].get<double>();
    if (doc.contains("alignment_window_days")) config.alignment_window_days = doc["alignment_window_days"].get<int>();
    if (doc.contains("random_seed")) config.random_seed = doc["random_seed"].get<unsigned>();
    config.topic_config.random_seed = config.random_seed;

    if (const char* env_out = std::getenv("DISANA_OUT_DIR"); env_out && *env_out) {
        config.out_dir = env_out;
    }
    return config;
}

void RunConfig::validate() const {
    if (window.begin > window.end) throw ValidationError("config: window begin is after end");
    if (query.empty()) throw ValidationError("config: query keyword is required");
    if (out_dir.empty()) throw ValidationError("config: output directory is required");
    if (expansion.top_k < 1) throw ValidationError("config: expansion top_k must be >= 1");
    if (expansion.min_similarity < -1.0 || expansion.min_similarity > 1.0) {
        throw ValidationError("config: min_similarity must be in [-1, 1]");
    }
    if (doc_embed_strategy != "mean-word-vector" && doc_embed_strategy != "precomputed-file") {
        throw ValidationError("config: doc_embed_strategy must be mean-word-vector or precomputed-file");
    }
    const auto need = [&](const std::string& path, const char* what) {
        if (path.empty()) throw ValidationError(std::string("config: ") + what + " path is required");
        if (!fs::exists(path)) throw ValidationError(std::string("config: ") + what + " not found: " + path);
    };
    need(corpus_path, "corpus");
    need(lexicon_path, "lexicon");
    need(lemma_table_path, "lemma_table");
    need(word_embeddings_path, "word_embeddings");
    if (doc_embed_strategy == "precomputed-file") need(doc_embeddings_path, "doc_embeddings");
    if (!theme_map_path.empty() && !fs::exists(theme_map_path)) {
        throw ValidationError("config: theme_map not found: " + theme_map_path);
    }
    need(phases_rki_path, "phases_rki");
    need(phases_policy_path, "phases_policy");
    need(events_path, "events");
}

namespace {

constexpr const char* kMetricNames[] = {"sum", "rel", "pos", "neg", "count"};

sentiment::Metric metric_from_name(const std::string& name) {
    if (name == "sum") return sentiment::Metric::SUM;
    if (name == "rel") return sentiment::Metric::REL;
    if (name == "pos") return sentiment::Metric::POS;
    if (name == "neg") return sentiment::Metric::NEG;
    if (name == "count") return sentiment::Metric::COUNT;
    throw ValidationError("unknown metric: " + name);
}

std::vector<sentiment::ScoredDoc> read_scored(const std::string& path) {
    const auto table = csv::read_file(path);
    std::vector<sentiment::ScoredDoc> docs;
    for (const auto& row : table.rows) {
        if (row.size() != 5) throw ValidationError("bad scored row in " + path);
        sentiment::ScoredDoc doc;
        doc.id = row[0];
        const auto ts = parse_timestamp(row[1]);
        if (!ts) throw ValidationError("bad timestamp in " + path + ": " + row[1]);
        doc.created_at = *ts;
        doc.score.pos = std::stoi(row[2]);
        doc.score.neg = std::stoi(row[3]);
        docs.push_back(std::move(doc));
    }
    return docs;
}

topics::TopicAssignment read_assignments(const std::string& path) {
    const auto table = csv::read_file(path);
    topics::TopicAssignment assignment;
    for (const auto& row : table.rows) {
        if (row.size() != 2) throw ValidationError("bad assignment row in " + path);
        assignment.ids.push_back(row[0]);
        assignment.topic_by_index.push_back(std::stoi(row[1]));
    }
    return assignment;
}

struct SeriesCatalogEntry {
    std::string name;
    sentiment::DailySeries series;
};

/// Metric series plus any cached theme series, in deterministic order.
std::vector<SeriesCatalogEntry> load_series_catalog(const RunConfig& config) {
    std::vector<SeriesCatalogEntry> catalog;
    for (const char* name : kMetricNames) {
        const std::string path = out_path(config, std::string("series_") + name + ".csv");
        catalog.push_back(SeriesCatalogEntry{
            name, sentiment::parse_series_csv(io::read_text_file(path), metric_from_name(name))});
    }
    std::vector<std::string> theme_files;
    for (const auto& entry : fs::directory_iterator(config.out_dir)) {
        const std::string fname = entry.path().filename().string();
        if (fname.rfind("theme_series_", 0) == 0 && fname.size() > 4 &&
            fname.substr(fname.size() - 4) == ".csv") {
            theme_files.push_back(entry.path().string());
        }
    }
    std::sort(theme_files.begin(), theme_files.end());
    for (const auto& path : theme_files) {
        const std::string stem = fs::path(path).stem().string(); // theme_series_<slug>
        catalog.push_back(SeriesCatalogEntry{
            stem.substr(std::string("theme_series_").size()),
            sentiment::parse_series_csv(io::read_text_file(path), sentiment::Metric::COUNT)});
    }
    return catalog;
}

json trend_to_json(const analytics::TrendResult& t) {
    return json{{"direction", analytics::trend_direction_name(t.direction)},
                {"S", t.S},
                {"var_s", t.var_s},
                {"z", t.z},
                {"p", t.p},
                {"alpha", t.alpha}};
}

} // namespace

void stage_expand(const RunConfig& config) {
    const auto load = corpus::load_corpus(config.corpus_path, config.window, config.lang);
    io::log_line("expand", "corpus loaded",
                 {{"read", std::to_string(load.stats.lines_read)},
                  {"kept", std::to_string(load.stats.kept)},
                  {"malformed", std::to_string(load.stats.malformed)}});
    const auto table = corpus::LemmaTable::load(config.lemma_table_path);
    const auto embeddings = seedex::load_embeddings(config.word_embeddings_path);

    const std::string query = text::to_lower(config.query);
    std::vector<corpus::TweetRecord> with_query;
    for (const auto& rec : load.records) {
        if (seedex::contains_query_token(rec, query)) with_query.push_back(rec);
    }
    auto candidates = seedex::collect_candidates(with_query, query, table, config.expansion);
    seedex::ExpansionDiagnostics diag;
    auto seeds = seedex::expand(query, std::move(candidates), embeddings, config.expansion, &diag);
    seeds.query_doc_count = with_query.size();

    io::write_file_atomic(out_path(config, "seed_list.tsv"), seedex::format_seed_list_tsv(seeds));
    json diag_doc{{"candidates_total", diag.candidates_total},
                  {"dropped_no_embedding", diag.dropped_no_embedding},
                  {"dropped_below_threshold", diag.dropped_below_threshold},
                  {"query_doc_count", seeds.query_doc_count},
                  {"duplicate_embedding_rows", embeddings.duplicate_rows}};
    io::write_file_atomic(out_path(config, "expand_diagnostics.json"), diag_doc.dump(2) + "\n");
    io::log_line("expand", "seed list written",
                 {{"terms", std::to_string(seeds.terms.size())},
                  {"query_docs", std::to_string(seeds.query_doc_count)}});
}

void stage_filter(const RunConfig& config) {
    const auto load = corpus::load_corpus(config.corpus_path, config.window, config.lang);
    const auto seeds =
        seedex::parse_seed_list_tsv(io::read_text_file(out_path(config, "seed_list.tsv")));
    relevance::ExclusionRule excl;
    excl.terms = {config.exclusion_terms.begin(), config.exclusion_terms.end()};
    relevance::MatchOptions options;
    options.substring = config.substring_match;

    const auto filtered = relevance::filter_corpus(load.records, seeds, excl, options);
    corpus::write_records(out_path(config, "relevant.jsonl"), filtered.relevant);
    json stats{{"total", filtered.stats.total},
               {"matched", filtered.stats.matched},
               {"excluded", filtered.stats.excluded},
               {"relevant", filtered.stats.relevant},
               {"lines_read", load.stats.lines_read},
               {"dropped_time", load.stats.dropped_time},
               {"dropped_lang", load.stats.dropped_lang},
               {"duplicate", load.stats.duplicate},
               {"malformed", load.stats.malformed}};
    io::write_file_atomic(out_path(config, "filter_stats.json"), stats.dump(2) + "\n");
    io::log_line("filter", "relevant corpus written",
                 {{"matched", std::to_string(filtered.stats.matched)},
                  {"excluded", std::to_string(filtered.stats.excluded)},
                  {"relevant", std::to_string(filtered.stats.relevant)}});
}

void stage_sentiment(const RunConfig& config) {
    const auto records = corpus::read_records(out_path(config, "relevant.jsonl"));
    const auto lexicon = sentiment::SentimentLexicon::load(config.lexicon_path);

    std::vector<sentiment::ScoredDoc> scored;
    scored.reserve(records.size());
    std::string scored_csv = "id,created_at,pos,neg,label\n";
    for (const auto& rec : records) {
        sentiment::ScoredDoc doc;
        doc.id = rec.id;
        doc.created_at = rec.created_at;
        doc.score = sentiment::score(corpus::tokenize(rec.text), lexicon);
        scored_csv += csv::join_row({doc.id, format_timestamp(doc.created_at),
                                     std::to_string(doc.score.pos), std::to_string(doc.score.neg),
                                     sentiment::label_name(sentiment::label(doc.score))});
        scored.push_back(std::move(doc));
    }
    io::write_file_atomic(out_path(config, "scored.csv"), scored_csv);

    const auto window = config.date_window();
    for (const char* name : kMetricNames) {
        const auto series = sentiment::aggregate(scored, metric_from_name(name), window);
        io::write_file_atomic(out_path(config, std::string("series_") + name + ".csv"),
                              sentiment::format_series_csv(series));
    }
    io::log_line("sentiment", "series written", {{"documents", std::to_string(scored.size())}});
}

void stage_topics(const RunConfig& config) {
    const auto records = corpus::read_records(out_path(config, "relevant.jsonl"));
    const auto scored = read_scored(out_path(config, "scored.csv"));

    topics::EmbedResult embedded;
    if (config.doc_embed_strategy == "precomputed-file") {
        embedded = topics::embed_docs_precomputed(records, config.doc_embeddings_path);
    } else {
        const auto embeddings = seedex::load_embeddings(config.word_embeddings_path);
        embedded = topics::embed_docs_mean(records, embeddings);
    }
    if (!embedded.missing_ids.empty()) {
        io::log_line("topics", "documents without precomputed vectors",
                     {{"missing", std::to_string(embedded.missing_ids.size())}});
    }

    const auto reduced =
        topics::reduce(embedded.vectors, config.topic_config.reduced_dim, config.random_seed);
    const auto assignment = topics::cluster(reduced, config.topic_config);
    const auto topic_list = topics::topic_terms(assignment, records, config.topic_config);
    auto labeled = topic_list;

    std::optional<topics::ThemeMap> theme_map;
    if (!config.theme_map_path.empty()) {
        theme_map = topics::ThemeMap::load(config.theme_map_path);
        for (auto& topic : labeled) {
            const auto it = theme_map->labels.find(topic.id);
            if (it != theme_map->labels.end()) topic.label = it->second;
        }
    }

    std::string assignments_csv = "tweet_id,topic_id\n";
    for (std::size_t i = 0; i < assignment.ids.size(); ++i) {
        assignments_csv += csv::join_row(
            {assignment.ids[i], std::to_string(assignment.topic_by_index[i])});
    }
    io::write_file_atomic(out_path(config, "assignments.csv"), assignments_csv);

    std::string terms_csv = "topic_id,rank,term,weight\n";
    for (const auto& topic : labeled) {
        for (std::size_t r = 0; r < topic.top_terms.size(); ++r) {
            terms_csv += csv::join_row({std::to_string(topic.id), std::to_string(r + 1),
                                        topic.top_terms[r].first,
                                        csv::format_double(topic.top_terms[r].second)});
        }
    }
    io::write_file_atomic(out_path(config, "topic_terms.csv"), terms_csv);

    const auto ranked = topics::rank_topics(assignment, labeled, scored);
    std::string table_csv = "rank,label,size,mean_rel\n";
    for (const auto& row : ranked) {
        table_csv += csv::join_row({std::to_string(row.rank), row.label, std::to_string(row.size),
                                    csv::format_double(row.mean_rel)});
    }
    io::write_file_atomic(out_path(config, "topic_table.csv"), table_csv);

    if (theme_map) {
        const auto window = config.date_window();
        const auto breakdown = topics::map_themes(assignment, *theme_map, scored, window);
        std::string summary_csv = "theme,size,mean_rel\n";
        for (const auto& row : breakdown.summary) {
            summary_csv += csv::join_row(
                {row.theme, std::to_string(row.size), csv::format_double(row.mean_rel)});
        }
        io::write_file_atomic(out_path(config, "theme_summary.csv"), summary_csv);
        for (const auto& [name, series] : breakdown.count_series) {
            io::write_file_atomic(out_path(config, theme_series_filename(name)),
                                  sentiment::format_series_csv(series));
        }

        // per-phase theme tables against both phase calendars
        const auto rki = analytics::load_phase_table(config.phases_rki_path, "rki");
        const auto policy = analytics::load_phase_table(config.phases_policy_path, "policy");
        std::unordered_map<std::string, const sentiment::ScoredDoc*> scored_by_id;
        for (const auto& doc : scored) scored_by_id.emplace(doc.id, &doc);
        std::map<int, std::string> theme_of_topic;
        for (const auto& [name, ids] : theme_map->themes) {
            for (int id : ids) theme_of_topic.emplace(id, name);
        }
        std::string phase_csv = "phase_table,phase,rank,theme,count,pct,mean_rel\n";
        for (const auto* table : {&rki, &policy}) {
            for (const auto& phase : table->rows) {
                struct Acc {
                    std::size_t n = 0;
                    std::int64_t sum = 0;
                };
                std::map<std::string, Acc> per_theme;
                std::size_t total = 0;
                for (std::size_t i = 0; i < assignment.ids.size(); ++i) {
                    const int cls = assignment.topic_by_index[i];
                    if (cls < 0) continue;
                    const auto theme_it = theme_of_topic.find(cls);
                    if (theme_it == theme_of_topic.end()) continue;
                    const auto* doc = scored_by_id.at(assignment.ids[i]);
                    const Date d = date_of(doc->created_at);
                    if (d < phase.begin || !(d < phase.end)) continue;
                    auto& acc = per_theme[theme_it->second];
                    ++acc.n;
                    acc.sum += doc->score.rescaled_sum();
                    ++total;
                }
                std::vector<std::pair<std::string, Acc>> rows(per_theme.begin(), per_theme.end());
                std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                    if (a.second.n != b.second.n) return a.second.n > b.second.n;
                    return a.first < b.first;
                });
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    const auto& [theme, acc] = rows[r];
                    phase_csv += csv::join_row(
                        {table->table_name, phase.name, std::to_string(r + 1), theme,
                         std::to_string(acc.n),
                         csv::format_double(total ? 100.0 * static_cast<double>(acc.n) /
                                                        static_cast<double>(total)
                                                  : 0.0),
                         csv::format_double(acc.n ? static_cast<double>(acc.sum) /
                                                        static_cast<double>(acc.n)
                                                  : 0.0)});
                }
            }
        }
        io::write_file_atomic(out_path(config, "themes_by_phase.csv"), phase_csv);
    }
    io::log_line("topics", "topic model written",
                 {{"topics", std::to_string(labeled.size())},
                  {"documents", std::to_string(records.size())}});
}

void stage_analytics(const RunConfig& config) {
    const auto catalog = load_series_catalog(config);
    const auto rki = analytics::load_phase_table(config.phases_rki_path, "rki");
    const auto policy = analytics::load_phase_table(config.phases_policy_path, "policy");
    auto events = analytics::load_events(config.events_path);

    // events outside the configured window are not aligned; keep a count
    const auto window = config.date_window();
    const std::size_t events_total = events.size();
    events.erase(std::remove_if(events.begin(), events.end(),
                                [&](const analytics::PolicyEvent& e) {
                                    return e.date < window.begin || window.end < e.date;
                                }),
                 events.end());
    if (events.size() != events_total) {
        io::log_line("analyze", "events outside window skipped",
                     {{"skipped", std::to_string(events_total - events.size())}});
    }

    std::string trends_csv = "series,direction,S,var_s,z,p,alpha\n";
    std::string peaks_csv = "series,date,value,side\n";
    std::string changes_csv = "series,index,date\n";
    std::string alignment_csv =
        "kind,date,phase_rki,phase_policy,event_date,event_desc,distance_days\n";
    json report_doc = json::object();

    for (const auto& entry : catalog) {
        const auto& values = entry.series.values;
        json series_doc;

        if (values.size() >= 4) {
            const auto trend = analytics::mann_kendall(values, config.alpha);
            trends_csv += csv::join_row({entry.name,
                                         analytics::trend_direction_name(trend.direction),
                                         std::to_string(trend.S), csv::format_double(trend.var_s),
                                         csv::format_double(trend.z), csv::format_double(trend.p),
                                         csv::format_double(trend.alpha)});
            series_doc["trend"] = trend_to_json(trend);
        } else {
            series_doc["trend"] = nullptr;
        }

        const auto peaks = analytics::detect_peaks(entry.series, config.peak_multiplier);
        series_doc["peak_thresholds"] = {{"upper", peaks.upper_threshold},
                                         {"lower", peaks.lower_threshold},
                                         {"multiplier", peaks.multiplier}};
        json peaks_json = json::array();
        for (const auto& peak : peaks.peaks) {
            peaks_csv += csv::join_row({entry.name, format_date(peak.date),
                                        csv::format_double(peak.value),
                                        peak.side == analytics::PeakSide::high ? "high" : "low"});
            peaks_json.push_back({{"date", format_date(peak.date)},
                                  {"value", peak.value},
                                  {"side", peak.side == analytics::PeakSide::high ? "high" : "low"}});
        }
        series_doc["peaks"] = peaks_json;

        const double penalty = config.changepoint_penalty ? *config.changepoint_penalty
                                                          : analytics::default_penalty(values);
        const auto segmentation = analytics::pelt(values, penalty);
        series_doc["changepoint_penalty"] = penalty;
        series_doc["total_cost"] = segmentation.total_cost;
        json changes_json = json::array();
        std::vector<analytics::SeriesPoint> points;
        for (const auto& peak : peaks.peaks) {
            points.push_back(analytics::SeriesPoint{analytics::PointKind::peak, peak.date,
                                                    peak.value});
        }
        for (std::size_t idx : segmentation.change_points()) {
            const Date d = entry.series.date_at(idx);
            changes_csv += csv::join_row({entry.name, std::to_string(idx), format_date(d)});
            changes_json.push_back({{"index", idx}, {"date", format_date(d)}});
            points.push_back(analytics::SeriesPoint{analytics::PointKind::changepoint, d,
                                                    entry.series.values[idx]});
        }
        series_doc["change_points"] = changes_json;

        const auto aligned = analytics::align(points, events, {rki, policy},
                                              config.alignment_window_days);
        json align_json = json::array();
        for (const auto& item : aligned.entries) {
            std::string phase_rki, phase_policy;
            for (const auto& [table, phase] : item.phases) {
                if (table == "rki") phase_rki = phase;
                if (table == "policy") phase_policy = phase;
            }
            const std::string kind =
                item.point.kind == analytics::PointKind::peak ? "peak" : "changepoint";
            json entry_json{{"kind", kind},
                            {"date", format_date(item.point.date)},
                            {"phase_rki", phase_rki},
                            {"phase_policy", phase_policy},
                            {"events", json::array()}};
            if (item.events.empty()) {
                alignment_csv += csv::join_row(
                    {kind, format_date(item.point.date), phase_rki, phase_policy, "", "", ""});
            }
            for (const auto& ev : item.events) {
                alignment_csv += csv::join_row({kind, format_date(item.point.date), phase_rki,
                                                phase_policy, format_date(ev.event.date),
                                                ev.event.description,
                                                std::to_string(ev.distance_days)});
                entry_json["events"].push_back({{"date", format_date(ev.event.date)},
                                                {"description", ev.event.description},
                                                {"country", ev.event.country},
                                                {"distance_days", ev.distance_days}});
            }
            align_json.push_back(std::move(entry_json));
        }
        series_doc["alignment"] = align_json;
        report_doc[entry.name] = std::move(series_doc);
    }

    io::write_file_atomic(out_path(config, "trends.csv"), trends_csv);
    io::write_file_atomic(out_path(config, "peaks.csv"), peaks_csv);
    io::write_file_atomic(out_path(config, "changepoints.csv"), changes_csv);
    io::write_file_atomic(out_path(config, "alignment.csv"), alignment_csv);
    io::write_file_atomic(out_path(config, "analytics_report.json"), report_doc.dump(2) + "\n");
    io::log_line("analyze", "analytics written", {{"series", std::to_string(catalog.size())}});
}

namespace {

std::vector<analytics::SeriesPoint> points_for_series(const RunConfig& config,
                                                      const std::string& name,
                                                      const sentiment::DailySeries& series) {
    std::vector<analytics::SeriesPoint> points;
    const auto peaks_table = csv::read_file(out_path(config, "peaks.csv"));
    for (const auto& row : peaks_table.rows) {
        if (row.size() == 4 && row[0] == name) {
            const auto d = parse_date(row[1]);
            if (d) {
                points.push_back(analytics::SeriesPoint{analytics::PointKind::peak, *d,
                                                        csv::parse_double(row[2])});
            }
        }
    }
    const auto change_table = csv::read_file(out_path(config, "changepoints.csv"));
    for (const auto& row : change_table.rows) {
        if (row.size() == 3 && row[0] == name) {
            const auto d = parse_date(row[2]);
            if (d) {
                const std::size_t idx = static_cast<std::size_t>(std::stoull(row[1]));
                const double v = idx < series.values.size() ? series.values[idx] : 0.0;
                points.push_back(
                    analytics::SeriesPoint{analytics::PointKind::changepoint, *d, v});
            }
        }
    }
    return points;
}

} // namespace

void stage_report(const RunConfig& config) {
    const auto catalog = load_series_catalog(config);
    const auto rki = analytics::load_phase_table(config.phases_rki_path, "rki");
    const auto policy = analytics::load_phase_table(config.phases_policy_path, "policy");

    std::vector<std::string> plots;
    for (const auto& entry : catalog) {
        const bool is_theme = std::string(entry.name).find("theme") != std::string::npos ||
                              entry.series.metric == sentiment::Metric::COUNT;
        plot::PlotOptions options;
        options.title = entry.name;
        const auto points = points_for_series(config, entry.name, entry.series);
        const auto& phase_rows = is_theme ? policy.rows : rki.rows;
        const std::string svg = plot::render_svg({{entry.name, &entry.series}}, phase_rows,
                                                 points, options);
        const std::string path = out_path(config, "plots/series_" + entry.name + ".svg");
        io::write_file_atomic(path, svg);
        plots.push_back(path);
    }

    // combined theme figure when themes exist
    std::vector<const SeriesCatalogEntry*> theme_entries;
    for (const auto& entry : catalog) {
        bool is_metric = false;
        for (const char* name : kMetricNames) {
            if (entry.name == name) is_metric = true;
        }
        if (!is_metric) theme_entries.push_back(&entry);
    }
    if (!theme_entries.empty()) {
        std::vector<plot::PlotSeries> series;
        std::vector<analytics::SeriesPoint> points;
        for (const auto* entry : theme_entries) {
            series.push_back(plot::PlotSeries{entry->name, &entry->series});
            const auto p = points_for_series(config, entry->name, entry->series);
            points.insert(points.end(), p.begin(), p.end());
        }
        plot::PlotOptions options;
        options.title = "themes";
        const std::string svg = plot::render_svg(series, policy.rows, points, options);
        const std::string path = out_path(config, "plots/themes.svg");
        io::write_file_atomic(path, svg);
        plots.push_back(path);
    }
    io::log_line("report", "plots written", {{"files", std::to_string(plots.size())}});
}

namespace {

void run_stage(const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const IoError&) {
        io::log_line(name, "stage aborted on I/O error");
        throw;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

} // namespace

ReportBundle run(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);

    run_stage("expand", [&] { stage_expand(config); });
    run_stage("filter", [&] { stage_filter(config); });
    run_stage("sentiment", [&] { stage_sentiment(config); });
    run_stage("topics", [&] { stage_topics(config); });
    run_stage("analyze", [&] { stage_analytics(config); });
    run_stage("report", [&] { stage_report(config); });

    // assemble the bundle from the stage caches
    ReportBundle bundle;
    bundle.out_dir = config.out_dir;
    bundle.seeds = seedex::parse_seed_list_tsv(io::read_text_file(out_path(config, "seed_list.tsv")));
    {
        json stats = json::parse(io::read_text_file(out_path(config, "filter_stats.json")));
        bundle.filter_stats.total = stats["total"].get<std::size_t>();
        bundle.filter_stats.matched = stats["matched"].get<std::size_t>();
        bundle.filter_stats.excluded = stats["excluded"].get<std::size_t>();
        bundle.filter_stats.relevant = stats["relevant"].get<std::size_t>();
    }
    for (const char* name : kMetricNames) {
        bundle.metric_series.emplace(
            name, sentiment::parse_series_csv(
                      io::read_text_file(out_path(config, std::string("series_") + name + ".csv")),
                      metric_from_name(name)));
    }
    {
        const auto table = csv::read_file(out_path(config, "topic_table.csv"));
        for (const auto& row : table.rows) {
            topics::TopicRankRow r;
            r.rank = std::stoi(row[0]);
            r.label = row[1];
            r.size = static_cast<std::size_t>(std::stoull(row[2]));
            r.mean_rel = csv::parse_double(row[3]);
            bundle.topic_table.push_back(std::move(r));
        }
    }
    if (fs::exists(out_path(config, "theme_summary.csv"))) {
        const auto table = csv::read_file(out_path(config, "theme_summary.csv"));
        for (const auto& row : table.rows) {
            bundle.theme_summary.push_back(topics::ThemeSummaryRow{
                row[0], static_cast<std::size_t>(std::stoull(row[1])), csv::parse_double(row[2])});
        }
        for (const auto& entry : load_series_catalog(config)) {
            bool is_metric = false;
            for (const char* name : kMetricNames) {
                if (entry.name == name) is_metric = true;
            }
            if (!is_metric) bundle.theme_series.emplace(entry.name, entry.series);
        }
    }
    {
        const auto table = csv::read_file(out_path(config, "trends.csv"));
        for (const auto& row : table.rows) {
            TrendRow t;
            t.series = row[0];
            if (row[1] == "increasing") t.result.direction = analytics::TrendDirection::increasing;
            else if (row[1] == "decreasing") t.result.direction = analytics::TrendDirection::decreasing;
            else t.result.direction = analytics::TrendDirection::no_trend;
            t.result.S = std::stoll(row[2]);
            t.result.var_s = csv::parse_double(row[3]);
            t.result.z = csv::parse_double(row[4]);
            t.result.p = csv::parse_double(row[5]);
            t.result.alpha = csv::parse_double(row[6]);
            bundle.trends.push_back(std::move(t));
        }
    }
    {
        const auto table = csv::read_file(out_path(config, "peaks.csv"));
        for (const auto& row : table.rows) {
            PeakRow p;
            p.series = row[0];
            p.peak.date = *parse_date(row[1]);
            p.peak.value = csv::parse_double(row[2]);
            p.peak.side = row[3] == "low" ? analytics::PeakSide::low : analytics::PeakSide::high;
            bundle.peaks.push_back(std::move(p));
        }
    }
    {
        const auto table = csv::read_file(out_path(config, "changepoints.csv"));
        for (const auto& row : table.rows) {
            ChangePointRow c;
            c.series = row[0];
            c.index = static_cast<std::size_t>(std::stoull(row[1]));
            c.date = *parse_date(row[2]);
            bundle.change_points.push_back(std::move(c));
        }
    }
    {
        const auto table = csv::read_file(out_path(config, "alignment.csv"));
        for (const auto& row : table.rows) {
            AlignmentRow a;
            a.kind = row[0] == "peak" ? analytics::PointKind::peak
                                      : analytics::PointKind::changepoint;
            a.date = *parse_date(row[1]);
            a.phase_rki = row[2];
            a.phase_policy = row[3];
            if (!row[4].empty()) a.event_date = parse_date(row[4]);
            a.event_desc = row[5];
            a.distance_days = row[6].empty() ? -1 : std::stoi(row[6]);
            bundle.alignment.push_back(std::move(a));
        }
    }
    if (fs::exists(out_path(config, "plots"))) {
        for (const auto& entry : fs::directory_iterator(out_path(config, "plots"))) {
            bundle.plot_files.push_back(entry.path().string());
        }
        std::sort(bundle.plot_files.begin(), bundle.plot_files.end());
    }

    const bool themes_present = !config.theme_map_path.empty();
    const auto add_section = [&](const std::string& name, bool written, const std::string& reason) {
        bundle.sections.push_back(SectionStatus{name, written, reason});
    };
    add_section("seed_list", true, "");
    add_section("filter_stats", true, "");
    add_section("relevant_corpus", true, "");
    add_section("scored", true, "");
    for (const char* name : kMetricNames) add_section(std::string("series_") + name, true, "");
    add_section("assignments", true, "");
    add_section("topic_table", true, "");
    add_section("topic_terms", true, "");
    add_section("theme_summary", themes_present, themes_present ? "" : "no theme map configured");
    add_section("theme_series", themes_present, themes_present ? "" : "no theme map configured");
    add_section("themes_by_phase", themes_present, themes_present ? "" : "no theme map configured");
    add_section("trends", true, "");
    add_section("peaks", true, "");
    add_section("changepoints", true, "");
    add_section("alignment", true, "");
    add_section("plots", true, "");

    json summary;
    summary["out_dir"] = config.out_dir;
    summary["query"] = config.query;
    summary["random_seed"] = config.random_seed;
    summary["sections"] = json::array();
    for (const auto& s : bundle.sections) {
        summary["sections"].push_back(
            {{"name", s.name}, {"written", s.written}, {"reason", s.reason}});
    }
    io::write_file_atomic(out_path(config, "run_summary.json"), summary.dump(2) + "\n");
    return bundle;
}

std::string emit_csv(const ReportBundle& bundle, const std::string& section) {
    const fs::path dir(bundle.out_dir);
    const auto write = [&](const std::string& filename, const std::string& contents) {
        const std::string path = (dir / filename).string();
        io::write_file_atomic(path, contents);
        return path;
    };

    if (section == "topic_table") {
        std::string out = "rank,label,size,mean_rel\n";
        for (const auto& row : bundle.topic_table) {
            out += csv::join_row({std::to_string(row.rank), row.label, std::to_string(row.size),
                                  csv::format_double(row.mean_rel)});
        }
        return write("topic_table.csv", out);
    }
    for (const auto& [name, series] : bundle.metric_series) {
        if (section == "series_" + name) {
            return write("series_" + name + ".csv", sentiment::format_series_csv(series));
        }
    }
    for (const auto& [name, series] : bundle.theme_series) {
        if (section == "theme_series_" + name) {
            return write(theme_series_filename(name), sentiment::format_series_csv(series));
        }
    }
    if (section == "theme_summary") {
        std::string out = "theme,size,mean_rel\n";
        for (const auto& row : bundle.theme_summary) {
            out += csv::join_row(
                {row.theme, std::to_string(row.size), csv::format_double(row.mean_rel)});
        }
        return write("theme_summary.csv", out);
    }
    if (section == "trends") {
        std::string out = "series,direction,S,var_s,z,p,alpha\n";
        for (const auto& t : bundle.trends) {
            out += csv::join_row({t.series, analytics::trend_direction_name(t.result.direction),
                                  std::to_string(t.result.S), csv::format_double(t.result.var_s),
                                  csv::format_double(t.result.z), csv::format_double(t.result.p),
                                  csv::format_double(t.result.alpha)});
        }
        return write("trends.csv", out);
    }
    if (section == "peaks") {
        std::string out = "series,date,value,side\n";
        for (const auto& p : bundle.peaks) {
            out += csv::join_row({p.series, format_date(p.peak.date),
                                  csv::format_double(p.peak.value),
                                  p.peak.side == analytics::PeakSide::high ? "high" : "low"});
        }
        return write("peaks.csv", out);
    }
    if (section == "changepoints") {
        std::string out = "series,index,date\n";
        for (const auto& c : bundle.change_points) {
            out += csv::join_row({c.series, std::to_string(c.index), format_date(c.date)});
        }
        return write("changepoints.csv", out);
    }
    if (section == "alignment") {
        std::string out = "kind,date,phase_rki,phase_policy,event_date,event_desc,distance_days\n";
        for (const auto& a : bundle.alignment) {
            out += csv::join_row({a.kind == analytics::PointKind::peak ? "peak" : "changepoint",
                                  format_date(a.date), a.phase_rki, a.phase_policy,
                                  a.event_date ? format_date(*a.event_date) : "", a.event_desc,
                                  a.distance_days < 0 ? "" : std::to_string(a.distance_days)});
        }
        return write("alignment.csv", out);
    }
    throw ValidationError("unknown report section: " + section);
}

} // namespace disana::report
