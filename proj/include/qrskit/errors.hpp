#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrskit {

// Precondition violations throw std::invalid_argument. Failures that depend
// on the data or the filesystem derive from Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), reason_(what), line_(line) {}

    const std::string& reason() const noexcept { return reason_; }

    // 1-based line number of the offending row.
    std::size_t line() const noexcept { return line_; }

private:
    std::string reason_;
    std::size_t line_;
};

class NoBeatsError : public Error {
public:
    explicit NoBeatsError(const std::string& detail = {})
        : Error(detail.empty() ? "no beats found" : "no beats found: " + detail) {}
};

}  // namespace qrskit
