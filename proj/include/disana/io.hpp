#ifndef DISANA_IO_HPP
#define DISANA_IO_HPP

#include <functional>
#include <string>
#include <vector>

namespace disana::io {

std::string read_text_file(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

/// Writes to `<path>.tmp` then renames, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Timestamped, stage-prefixed log line with a key=value tail, e.g.
///   2021-03-15T08:00:00Z [filter] wrote relevant corpus kept=995 excluded=5
void log_line(const std::string& stage, const std::string& message,
              const std::vector<std::pair<std::string, std::string>>& kv = {});

} // namespace disana::io

#endif
