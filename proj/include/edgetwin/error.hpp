#pragma once

#include <stdexcept>
#include <string>

namespace edgetwin {

// Bad user input: malformed config, out-of-range spec fields, unknown keys.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A caller broke an API contract (e.g. admit() on an inadmissible pair,
// action index out of range). Distinct from ValidationError so the CLI can
// map them to different exit codes.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// A scenario produced no task over the whole episode.
class EmptyEpisodeError : public std::runtime_error {
public:
    explicit EmptyEpisodeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace edgetwin
