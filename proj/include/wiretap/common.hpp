#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wiretap {

// Byte sequences travel as std::string; the content is not assumed to be text.
using Bytes = std::string;
using BytesView = std::string_view;

// Milliseconds since the Unix epoch.
using TimestampMs = std::int64_t;

// Error taxonomy. The CLI maps each class onto a documented exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record (bad JSON, missing field, unknown record kind).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed records that violate a cross-record invariant.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Bad configuration: unknown transform name, missing list file, bad flag value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on inputs outside its contract (e.g. empty corpus).
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

std::string to_hex(BytesView bytes, bool upper = false);
Bytes from_hex(std::string_view hex);

inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_alnum(unsigned char c) { return is_ascii_digit(c) || is_ascii_alpha(c); }

std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);

// Renders a percentage with two decimals, as in the report tables.
std::string format_percent(double value);

}  // namespace wiretap
