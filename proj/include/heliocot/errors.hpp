#pragma once

#include <stdexcept>
#include <string>

namespace heliocot {

// Bad inputs: out-of-range values, malformed files, broken preconditions.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number when known.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, long line = 0)
        : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_ = 0;
};

// Required exposure metadata absent from an image; names the missing field.
class MetadataError : public ValidationError {
public:
    explicit MetadataError(const std::string& field)
        : ValidationError("missing exposure metadata: " + field), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Filesystem trouble: unreadable/unwritable paths. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace heliocot
