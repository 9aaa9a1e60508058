#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grood {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  SingularW,
  InRange,
  ZeroB,
  Deflating,
  RankDeficient,
  NoConvergence,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Text-format error carrying the 1-based line number of the offending line.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::DimensionMismatch, what);
}

}  // namespace grood
