#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace norden {

/// Bad call: mismatched jet shapes, index out of range, invalid dimension.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical evaluation failed (domain violation, zero division, non-finite result).
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what, std::string span = {})
      : std::runtime_error(span.empty() ? what : what + " in '" + span + "'"),
        reason_(what),
        span_(std::move(span)) {}

  const std::string& reason() const noexcept { return reason_; }
  /// Source text of the innermost sub-expression that failed, if known.
  const std::string& span() const noexcept { return span_; }

 private:
  std::string reason_;
  std::string span_;
};

enum class ParseErrorKind {
  syntax,
  unknown_identifier,
  coordinate_range,
  non_integer_exponent,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

/// A chart failed the almost Norden axioms or has a singular / ill-conditioned metric.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed manifold file or CLI input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace norden
