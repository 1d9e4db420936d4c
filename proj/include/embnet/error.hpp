#pragma once

#include <stdexcept>
#include <string>

namespace embnet {

// Bad arguments, malformed inputs, violated preconditions. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failure in a text input, carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& msg)
        : ValidationError(path + ":" + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Filesystem trouble (open/write failures). CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace embnet
