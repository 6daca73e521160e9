#include "disana/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "disana/csv.hpp"
#include "disana/errors.hpp"

namespace disana::analytics {

std::string trend_direction_name(TrendDirection d) {
    switch (d) {
        case TrendDirection::increasing: return "increasing";
        case TrendDirection::decreasing: return "decreasing";
        case TrendDirection::no_trend: return "no_trend";
    }
    return "no_trend";
}

namespace {

/// Strict inversions (i < j with x_i > x_j) via merge sort.
long long count_inversions(std::vector<double> values) {
    std::vector<double> buf(values.size());
    long long inversions = 0;
    for (std::size_t width = 1; width < values.size(); width *= 2) {
        for (std::size_t lo = 0; lo + width < values.size(); lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, values.size());
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (values[j] < values[i]) {
                    inversions += static_cast<long long>(mid - i);
                    buf[k++] = values[j++];
                } else {
                    buf[k++] = values[i++];
                }
            }
            while (i < mid) buf[k++] = values[i++];
            while (j < hi) buf[k++] = values[j++];
            std::copy(buf.begin() + lo, buf.begin() + hi, values.begin() + lo);
        }
    }
    return inversions;
}

} // namespace

TrendResult mann_kendall(const std::vector<double>& series, double alpha) {
    const std::size_t n = series.size();
    if (n < 4) throw ValidationError("mann_kendall needs at least 4 observations");
    for (double v : series) {
        if (!std::isfinite(v)) throw ValidationError("mann_kendall: non-finite value");
    }

    // S = P - M; with T total pairs and E tied pairs, P + M = T - E, so
    // S = T - E - 2M where M is the strict inversion count.
    std::map<double, long long> groups;
    for (double v : series) ++groups[v];
    const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
    long long tied_pairs = 0;
    double tie_correction = 0.0;
    for (const auto& [value, t] : groups) {
        tied_pairs += t * (t - 1) / 2;
        tie_correction += static_cast<double>(t) * (t - 1) * (2 * t + 5);
    }
    const long long inversions = count_inversions(series);
    const long long S = total_pairs - tied_pairs - 2 * inversions;

    const double nn = static_cast<double>(n);
    const double var_s = (nn * (nn - 1) * (2 * nn + 5) - tie_correction) / 18.0;

    TrendResult result;
    result.S = S;
    result.var_s = var_s;
    result.alpha = alpha;
    if (var_s <= 0.0) {
        // every value tied
        result.z = 0.0;
        result.p = 1.0;
        result.direction = TrendDirection::no_trend;
        return result;
    }
    if (S > 0) {
        result.z = (static_cast<double>(S) - 1.0) / std::sqrt(var_s);
    } else if (S < 0) {
        result.z = (static_cast<double>(S) + 1.0) / std::sqrt(var_s);
    } else {
        result.z = 0.0;
    }
    result.p = std::erfc(std::abs(result.z) / std::sqrt(2.0)); // two-sided
    if (S == 0 || result.p >= alpha) {
        result.direction = TrendDirection::no_trend;
    } else {
        result.direction = S > 0 ? TrendDirection::increasing : TrendDirection::decreasing;
    }
    return result;
}

PeakSet detect_peaks_values(const std::vector<double>& values, double multiplier) {
    if (values.size() < 2) throw ValidationError("peak detection needs at least 2 values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size()); // population
    const double sd = std::sqrt(var);

    PeakSet set;
    set.multiplier = multiplier;
    const double upper_base = mean + sd;
    const double lower_base = mean - sd;
    set.upper_threshold = upper_base + multiplier * std::abs(upper_base);
    set.lower_threshold = lower_base - multiplier * std::abs(lower_base);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > set.upper_threshold) {
            set.peaks.push_back(Peak{i, Date{0}, values[i], PeakSide::high});
        } else if (values[i] < set.lower_threshold) {
            set.peaks.push_back(Peak{i, Date{0}, values[i], PeakSide::low});
        }
    }
    return set;
}

PeakSet detect_peaks(const sentiment::DailySeries& series, double multiplier) {
    PeakSet set = detect_peaks_values(series.values, multiplier);
    for (auto& peak : set.peaks) peak.date = series.date_at(peak.index);
    return set;
}

ChangePointResult pelt(const std::vector<double>& series, double penalty) {
    const std::size_t n = series.size();
    if (n < 2) throw ValidationError("pelt needs at least 2 values");
    if (!(penalty >= 0.0)) throw ValidationError("pelt penalty must be nonnegative");

    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + series[i];
        prefix_sq[i + 1] = prefix_sq[i] + series[i] * series[i];
    }
    const auto seg_cost = [&](std::size_t s, std::size_t t) {
        const double len = static_cast<double>(t - s);
        const double sum = prefix[t] - prefix[s];
        return (prefix_sq[t] - prefix_sq[s]) - sum * sum / len;
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n + 1, inf);
    std::vector<std::size_t> prev(n + 1, 0);
    best[0] = 0.0;

    std::vector<std::size_t> candidates{0};
    std::vector<std::size_t> survivors;
    for (std::size_t t = 1; t <= n; ++t) {
        double best_value = inf;
        std::size_t best_s = 0;
        for (std::size_t s : candidates) {
            const double v = best[s] + seg_cost(s, t) + penalty;
            if (v < best_value) {
                best_value = v;
                best_s = s;
            }
        }
        best[t] = best_value;
        prev[t] = best_s;

        // Prune with slack so float noise cannot evict the true optimum.
        const double slack = 1e-9 * (1.0 + std::abs(best_value));
        survivors.clear();
        for (std::size_t s : candidates) {
            if (best[s] + seg_cost(s, t) <= best_value + slack) survivors.push_back(s);
        }
        survivors.push_back(t);
        candidates.swap(survivors);
    }

    ChangePointResult result;
    result.penalty = penalty;
    result.total_cost = best[n];
    std::vector<std::size_t> bounds;
    for (std::size_t t = n; t > 0; t = prev[t]) bounds.push_back(t);
    std::reverse(bounds.begin(), bounds.end());
    result.indices = std::move(bounds);
    return result;
}

double default_penalty(const std::vector<double>& series) {
    if (series.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= static_cast<double>(series.size());
    return 2.0 * var * std::log(static_cast<double>(series.size()));
}

const PhaseRow* PhaseTable::containing(Date d) const {
    for (const auto& row : rows) {
        if (row.begin <= d && d < row.end) return &row;
    }
    return nullptr;
}

PhaseTable load_phase_table(const std::string& path, const std::string& table_name) {
    const auto table = csv::read_file(path);
    if (table.header != std::vector<std::string>{"name", "begin", "end"}) {
        throw ValidationError("phase table " + path + ": header must be name,begin,end");
    }
    PhaseTable result;
    result.table_name = table_name;
    for (const auto& row : table.rows) {
        if (row.size() != 3) throw ValidationError("phase table " + path + ": bad row");
        const auto begin = parse_date(row[1]);
        const auto end = parse_date(row[2]);
        if (row[0].empty() || !begin || !end || !(*begin < *end)) {
            throw ValidationError("phase table " + path + ": bad interval for '" + row[0] + "'");
        }
        result.rows.push_back(PhaseRow{row[0], *begin, *end});
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].begin < result.rows[i - 1].end) {
            throw ValidationError("phase table " + path + ": rows '" + result.rows[i - 1].name +
                                  "' and '" + result.rows[i].name + "' overlap or are unordered");
        }
    }
    return result;
}

std::string format_phase_table_csv(const PhaseTable& table) {
    std::string out = "name,begin,end\n";
    for (const auto& row : table.rows) {
        out += csv::join_row({row.name, format_date(row.begin), format_date(row.end)});
    }
    return out;
}

std::vector<PolicyEvent> load_events(const std::string& path) {
    const auto table = csv::read_file(path);
    const std::vector<std::string> expected{"date",       "description", "country",
                                            "source",     "rki_phase",   "policy_phase"};
    if (table.header != expected) {
        throw ValidationError("events file " + path +
                              ": header must be date,description,country,source,rki_phase,policy_phase");
    }
    std::vector<PolicyEvent> events;
    for (const auto& row : table.rows) {
        if (row.size() != 6) throw ValidationError("events file " + path + ": bad row");
        const auto date = parse_date(row[0]);
        if (!date) throw ValidationError("events file " + path + ": bad date '" + row[0] + "'");
        if (row[2] != "DE" && row[2] != "AT" && row[2] != "CH") {
            throw ValidationError("events file " + path + ": unknown country '" + row[2] + "'");
        }
        events.push_back(PolicyEvent{*date, row[1], row[2], row[3], row[4], row[5]});
    }
    return events;
}

std::string format_events_csv(const std::vector<PolicyEvent>& events) {
    std::string out = "date,description,country,source,rki_phase,policy_phase\n";
    for (const auto& e : events) {
        out += csv::join_row({format_date(e.date), e.description, e.country, e.source,
                              e.rki_phase, e.policy_phase});
    }
    return out;
}

AlignmentReport align(const std::vector<SeriesPoint>& points,
                      const std::vector<PolicyEvent>& events,
                      const std::vector<PhaseTable>& phase_tables, int window_days) {
    if (window_days < 0) throw ValidationError("alignment window must be nonnegative");
    AlignmentReport report;
    report.window_days = window_days;
    for (const auto& point : points) {
        AlignmentEntry entry;
        entry.point = point;
        for (const auto& table : phase_tables) {
            const auto* row = table.containing(point.date);
            entry.phases.emplace_back(table.table_name, row ? row->name : "");
        }
        for (const auto& event : events) {
            const int distance = std::abs(event.date.days - point.date.days);
            if (distance <= window_days) {
                entry.events.push_back(AlignedEvent{event, distance});
            }
        }
        std::sort(entry.events.begin(), entry.events.end(),
                  [](const AlignedEvent& a, const AlignedEvent& b) {
                      if (a.distance_days != b.distance_days) {
                          return a.distance_days < b.distance_days;
                      }
                      if (a.event.country != b.event.country) {
                          return a.event.country < b.event.country;
                      }
                      return a.event.description < b.event.description;
                  });
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace disana::analytics
