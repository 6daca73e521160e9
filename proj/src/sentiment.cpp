#include "disana/sentiment.hpp"

#include <cstdlib>
#include <sstream>

#include "disana/csv.hpp"
#include "disana/errors.hpp"
#include "disana/io.hpp"
#include "disana/text.hpp"

namespace disana::sentiment {

SentimentLexicon SentimentLexicon::load(const std::string& path) {
    SentimentLexicon lex;
    const auto lines = io::read_lines(path);
    std::size_t lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string term, cls, strength;
        std::getline(row, term, '\t');
        std::getline(row, cls, '\t');
        std::getline(row, strength);
        term = text::to_lower(term);
        const auto fail = [&](const std::string& why) {
            throw ValidationError("lexicon " + path + " line " + std::to_string(lineno) + ": " + why);
        };
        if (term.empty()) fail("empty term");
        const bool already = lex.entries.count(term) || lex.boosters.count(term) ||
                             lex.negators.count(term);
        if (already) fail("term '" + term + "' listed twice");
        if (cls == "sentiment") {
            char* end = nullptr;
            const long v = std::strtol(strength.c_str(), &end, 10);
            if (end == strength.c_str() || *end != '\0') fail("bad strength '" + strength + "'");
            const bool in_range = (v >= 2 && v <= 5) || (v >= -5 && v <= -2);
            if (!in_range) fail("strength " + std::to_string(v) + " outside +-2..5");
            lex.entries.emplace(term, static_cast<int>(v));
        } else if (cls == "booster") {
            lex.boosters.insert(term);
        } else if (cls == "negator") {
            lex.negators.insert(term);
        } else {
            fail("unknown class '" + cls + "'");
        }
    }
    return lex;
}

std::string label_name(Label l) {
    switch (l) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::neutral_mixed: return "neutral_mixed";
    }
    return "neutral_mixed";
}

SentimentScore score(const std::vector<corpus::Token>& tokens, const SentimentLexicon& lexicon) {
    int best_pos = 0;
    int best_neg = 0; // magnitude of strongest negative
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto it = lexicon.entries.find(tokens[i].surface);
        if (it == lexicon.entries.end()) continue;
        int strength = it->second;
        if (i > 0) {
            const auto& prev = tokens[i - 1].surface;
            if (lexicon.negators.count(prev)) {
                strength = -strength;
            } else if (lexicon.boosters.count(prev)) {
                strength += strength > 0 ? 1 : -1;
                if (strength > 5) strength = 5;
                if (strength < -5) strength = -5;
            }
        }
        if (strength > 0 && strength > best_pos) best_pos = strength;
        if (strength < 0 && -strength > best_neg) best_neg = -strength;
    }
    SentimentScore s;
    s.pos = best_pos > 0 ? best_pos : 1;
    s.neg = best_neg > 0 ? -best_neg : -1;
    return s;
}

Label label(const SentimentScore& s) {
    const int neg_magnitude = -s.neg;
    if (s.pos > neg_magnitude) return Label::positive;
    if (neg_magnitude > s.pos) return Label::negative;
    return Label::neutral_mixed;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::SUM: return "sum";
        case Metric::REL: return "rel";
        case Metric::POS: return "pos";
        case Metric::NEG: return "neg";
        case Metric::COUNT: return "count";
    }
    return "sum";
}

DailySeries aggregate(const std::vector<ScoredDoc>& docs, Metric metric,
                      const DateWindow& window) {
    if (window.begin > window.end) throw ValidationError("date window begin after end");
    const std::size_t n_days = static_cast<std::size_t>(window.end.days - window.begin.days) + 1;

    std::vector<std::int64_t> sums(n_days, 0);
    std::vector<std::int64_t> pos_counts(n_days, 0);
    std::vector<std::int64_t> neg_counts(n_days, 0);
    std::vector<std::int64_t> counts(n_days, 0);

    for (const auto& doc : docs) {
        const Date d = date_of(doc.created_at);
        if (d < window.begin || d > window.end) {
            throw ValidationError("scored document " + doc.id + " outside the aggregation window");
        }
        const std::size_t idx = static_cast<std::size_t>(d.days - window.begin.days);
        sums[idx] += doc.score.rescaled_sum();
        ++counts[idx];
        const Label l = label(doc.score);
        if (l == Label::positive) ++pos_counts[idx];
        if (l == Label::negative) ++neg_counts[idx];
    }

    DailySeries series;
    series.metric = metric;
    series.begin = window.begin;
    series.values.resize(n_days, 0.0);
    series.counts.assign(counts.begin(), counts.end());
    for (std::size_t i = 0; i < n_days; ++i) {
        if (counts[i] == 0) series.empty_days.push_back(series.date_at(i));
        switch (metric) {
            case Metric::SUM:
                series.values[i] = static_cast<double>(sums[i]);
                break;
            case Metric::REL:
                series.values[i] = counts[i] == 0 ? 0.0
                                                  : static_cast<double>(sums[i]) /
                                                        static_cast<double>(counts[i]);
                break;
            case Metric::POS:
                series.values[i] = static_cast<double>(pos_counts[i]);
                break;
            case Metric::NEG:
                series.values[i] = static_cast<double>(neg_counts[i]);
                break;
            case Metric::COUNT:
                series.values[i] = static_cast<double>(counts[i]);
                break;
        }
    }
    return series;
}

std::string format_series_csv(const DailySeries& series) {
    std::string out = "date,value,count,empty_flag\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_date(series.date_at(i)) + ',' + csv::format_double(series.values[i]) + ',' +
               std::to_string(series.counts[i]) + ',' + (series.counts[i] == 0 ? "1" : "0") + '\n';
    }
    return out;
}

DailySeries parse_series_csv(const std::string& csv_text, Metric metric) {
    DailySeries series;
    series.metric = metric;
    std::istringstream in(csv_text);
    std::string line;
    bool header = true;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto fields = csv::split_row(line);
        if (fields.size() != 4) throw ValidationError("bad series row: '" + line + "'");
        const auto date = parse_date(fields[0]);
        if (!date) throw ValidationError("bad date in series row: '" + fields[0] + "'");
        if (first) {
            series.begin = *date;
            first = false;
        } else if (date->days != series.begin.days + static_cast<std::int32_t>(series.values.size())) {
            throw ValidationError("series dates not contiguous at " + fields[0]);
        }
        series.values.push_back(csv::parse_double(fields[1]));
        series.counts.push_back(std::stoll(fields[2]));
        if (fields[3] == "1") series.empty_days.push_back(*date);
    }
    if (first) throw ValidationError("series CSV has no rows");
    return series;
}

} // namespace disana::sentiment
