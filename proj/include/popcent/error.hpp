#pragma once

#include <stdexcept>
#include <string>

namespace popcent {

/// Malformed input text (edge list, CSV, config, serialized results).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input parsed but violates a domain constraint (popularity range, duplicate id, ...).
class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller passed arguments outside an operation's precondition.
class ArgumentError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A statistic is mathematically undefined on the given input (zero variance, no eligible edges).
class UndefinedStatistic : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Refusal to run an all-pairs computation on a graph above the configured size limit.
class SizeLimitError : public std::length_error {
    using std::length_error::length_error;
};

/// Serialized artifact carries a schema version this build cannot read.
class SchemaError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace popcent
