#ifndef DISANA_DATE_HPP
#define DISANA_DATE_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace disana {

/// Calendar day, stored as days since 1970-01-01 (UTC). Cheap value type so
/// series code can do plain integer arithmetic on days.
struct Date {
    std::int32_t days = 0;

    constexpr bool operator==(const Date&) const = default;
    constexpr auto operator<=>(const Date&) const = default;

    Date next() const { return Date{days + 1}; }
};

std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t z, int& year, int& month, int& day);

/// "YYYY-MM-DD" -> Date; rejects impossible dates (2021-02-30).
std::optional<Date> parse_date(const std::string& text);
std::string format_date(Date d);

/// ISO-8601 timestamp with second precision -> seconds since epoch (UTC).
/// Accepts "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds (ignored)
/// and optional zone: "Z", "+hh:mm", "-hh:mm" or "+hhmm". A bare date means
/// midnight UTC; a missing zone means UTC.
std::optional<std::int64_t> parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t epoch_seconds);

/// UTC calendar day of a timestamp.
Date date_of(std::int64_t epoch_seconds);

} // namespace disana

#endif
