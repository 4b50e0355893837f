#pragma once

#include <stdexcept>
#include <string>

namespace crjet {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Violated precondition or domain restriction (mismatched variable lists,
/// singular matrix, invalid construction data).
struct domain_error : error {
    using error::error;
};

/// An operation needed coefficients beyond the known truncation degree.
struct truncation_error : error {
    using error::error;
};

/// Input text rejected by a parser; line and col are 1-based.
struct parse_error : error {
    int line;
    int col;
    parse_error(const std::string& msg, int line_, int col_)
        : error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

} // namespace crjet
