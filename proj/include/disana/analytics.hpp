#ifndef DISANA_ANALYTICS_HPP
#define DISANA_ANALYTICS_HPP

#include <string>
#include <vector>

#include "disana/date.hpp"
#include "disana/sentiment.hpp"

namespace disana::analytics {

enum class TrendDirection { increasing, decreasing, no_trend };

std::string trend_direction_name(TrendDirection d);

/// Mann-Kendall test with tie-corrected variance and continuity-corrected
/// normal approximation; no seasonal or autocorrelation handling.
struct TrendResult {
    TrendDirection direction = TrendDirection::no_trend;
    long long S = 0;
    double var_s = 0.0;
    double z = 0.0;
    double p = 1.0;
    double alpha = 0.05;
};

/// Requires at least 4 observations. All-tied input yields no_trend, p = 1.
TrendResult mann_kendall(const std::vector<double>& series, double alpha = 0.05);

enum class PeakSide { high, low };

struct Peak {
    std::size_t index = 0;
    Date date;
    double value = 0.0;
    PeakSide side = PeakSide::high;
};

/// Values outside (mean +- std) inflated by `multiplier` times the bound's
/// magnitude. Thresholds use the population standard deviation of the full
/// series.
struct PeakSet {
    double multiplier = 1.5;
    double upper_threshold = 0.0;
    double lower_threshold = 0.0;
    std::vector<Peak> peaks;
};

PeakSet detect_peaks_values(const std::vector<double>& values, double multiplier = 1.5);
PeakSet detect_peaks(const sentiment::DailySeries& series, double multiplier = 1.5);

/// Optimal penalized segmentation: indices are exclusive segment ends, the
/// last always equals the series length; total_cost covers every segment's
/// squared deviation from its mean plus penalty per segment.
struct ChangePointResult {
    std::vector<std::size_t> indices;
    double penalty = 0.0;
    double total_cost = 0.0;

    /// Interior boundaries, i.e. the change points proper.
    std::vector<std::size_t> change_points() const {
        if (indices.size() <= 1) return {};
        return {indices.begin(), indices.end() - 1};
    }
};

ChangePointResult pelt(const std::vector<double>& series, double penalty);

/// 2 * variance * log(n): the penalty used when the run configuration does
/// not pin one.
double default_penalty(const std::vector<double>& series);

/// Named, ordered, non-overlapping date intervals, half-open [begin, end).
struct PhaseRow {
    std::string name;
    Date begin;
    Date end;
};

struct PhaseTable {
    std::string table_name;
    std::vector<PhaseRow> rows;

    /// Phase containing d, or nullptr when d falls in a gap.
    const PhaseRow* containing(Date d) const;
};

/// CSV columns name, begin, end. Overlapping or unordered rows are fatal.
PhaseTable load_phase_table(const std::string& path, const std::string& table_name);
std::string format_phase_table_csv(const PhaseTable& table);

struct PolicyEvent {
    Date date;
    std::string description;
    std::string country; // DE, AT or CH
    std::string source;
    std::string rki_phase;
    std::string policy_phase;
};

/// CSV columns date, description, country, source, rki_phase, policy_phase.
std::vector<PolicyEvent> load_events(const std::string& path);
std::string format_events_csv(const std::vector<PolicyEvent>& events);

enum class PointKind { peak, changepoint };

struct SeriesPoint {
    PointKind kind = PointKind::peak;
    Date date;
    double value = 0.0;
};

struct AlignedEvent {
    PolicyEvent event;
    int distance_days = 0; // |event date - point date|
};

struct AlignmentEntry {
    SeriesPoint point;
    std::vector<std::pair<std::string, std::string>> phases; // table name -> phase name
    std::vector<AlignedEvent> events; // |distance| asc, then country, description
};

struct AlignmentReport {
    int window_days = 0;
    std::vector<AlignmentEntry> entries;
};

AlignmentReport align(const std::vector<SeriesPoint>& points,
                      const std::vector<PolicyEvent>& events,
                      const std::vector<PhaseTable>& phase_tables, int window_days);

} // namespace disana::analytics

#endif
