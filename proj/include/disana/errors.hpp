#ifndef DISANA_ERRORS_HPP
#define DISANA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace disana {

/// Bad inputs: malformed configuration, violated preconditions, unparseable
/// data files. Maps to exit code 1 when raised during validation.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem trouble: unreadable, unwritable, missing. Exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A pipeline stage aborted; carries the stage name with the cause. Exit code 2.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string stage_name, const std::string& cause)
        : std::runtime_error("stage '" + stage_name + "' failed: " + cause),
          stage(std::move(stage_name)) {}
};

} // namespace disana

#endif
