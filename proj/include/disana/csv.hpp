#ifndef DISANA_CSV_HPP
#define DISANA_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace disana::csv {

/// RFC-4180-style field quoting: fields containing comma, quote, CR or LF
/// are wrapped in double quotes with inner quotes doubled.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

/// Splits one physical CSV record into fields. The record must already be a
/// complete logical row (embedded newlines inside quotes are not produced by
/// our writers). Throws ValidationError on unbalanced quotes.
std::vector<std::string> split_row(std::string_view row);

/// Reads a whole CSV file: first row is the header, rest are data rows.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
Table read_file(const std::string& path);

/// Shortest decimal representation that round-trips through double.
std::string format_double(double v);
double parse_double(std::string_view s);

} // namespace disana::csv

#endif
