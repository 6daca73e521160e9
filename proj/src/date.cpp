#include "disana/date.hpp"

#include <cctype>
#include <cstdio>

namespace disana {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

} // namespace

std::int64_t days_from_civil(int y, int m, int d) {
    // proleptic Gregorian; era-based civil conversion
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    year = static_cast<int>(y + (month <= 2));
}

std::optional<Date> parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!all_digits(text, 0, 4) || !all_digits(text, 5, 2) || !all_digits(text, 8, 2)) {
        return std::nullopt;
    }
    const int y = to_int(text, 0, 4);
    const int m = to_int(text, 5, 2);
    const int d = to_int(text, 8, 2);
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
    return Date{static_cast<std::int32_t>(days_from_civil(y, m, d))};
}

std::string format_date(Date d) {
    int y, m, day;
    civil_from_days(d.days, y, m, day);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, day);
    return buf;
}

std::optional<std::int64_t> parse_timestamp(const std::string& text) {
    if (text.size() < 10) return std::nullopt;
    auto date = parse_date(text.substr(0, 10));
    if (!date) return std::nullopt;
    std::int64_t seconds = static_cast<std::int64_t>(date->days) * kSecondsPerDay;
    if (text.size() == 10) return seconds;

    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    if (text.size() < 19 || text[13] != ':' || text[16] != ':') return std::nullopt;
    if (!all_digits(text, 11, 2) || !all_digits(text, 14, 2) || !all_digits(text, 17, 2)) {
        return std::nullopt;
    }
    const int hh = to_int(text, 11, 2);
    const int mm = to_int(text, 14, 2);
    const int ss = to_int(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    seconds += hh * 3600 + mm * 60 + ss;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }
    if (pos == text.size()) return seconds; // no zone: treat as UTC
    if (text[pos] == 'Z' && pos + 1 == text.size()) return seconds;

    if (text[pos] != '+' && text[pos] != '-') return std::nullopt;
    const int sign = text[pos] == '+' ? 1 : -1;
    ++pos;
    if (!all_digits(text, pos, 2)) return std::nullopt;
    const int oh = to_int(text, pos, 2);
    pos += 2;
    if (pos < text.size() && text[pos] == ':') ++pos;
    int om = 0;
    if (pos < text.size()) {
        if (!all_digits(text, pos, 2) || pos + 2 != text.size()) return std::nullopt;
        om = to_int(text, pos, 2);
        pos += 2;
    }
    if (oh > 14 || om > 59) return std::nullopt;
    return seconds - sign * (oh * 3600 + om * 60);
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    std::int64_t rest = epoch_seconds % kSecondsPerDay;
    if (rest < 0) {
        rest += kSecondsPerDay;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rest / 3600), static_cast<int>((rest / 60) % 60),
                  static_cast<int>(rest % 60));
    return buf;
}

Date date_of(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    if (epoch_seconds % kSecondsPerDay < 0) --days;
    return Date{static_cast<std::int32_t>(days)};
}

} // namespace disana
