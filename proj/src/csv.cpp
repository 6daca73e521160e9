#include "disana/csv.hpp"

#include <charconv>
#include <fstream>

#include "disana/errors.hpp"

namespace disana::csv {

std::string escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

std::vector<std::string> split_row(std::string_view row) {
    while (!row.empty() && (row.back() == '\n' || row.back() == '\r')) {
        row.remove_suffix(1);
    }
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    while (i < row.size()) {
        const char c = row[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < row.size() && row[i + 1] == '"') {
                    cur.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
            } else {
                cur.push_back(c);
                ++i;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
            ++i;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            ++i;
        } else {
            cur.push_back(c);
            ++i;
        }
    }
    if (quoted) throw ValidationError("unbalanced quote in CSV row: " + std::string(row));
    fields.push_back(std::move(cur));
    return fields;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open CSV file: " + path);
    Table table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_row(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw ValidationError("cannot format double");
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

} // namespace disana::csv
