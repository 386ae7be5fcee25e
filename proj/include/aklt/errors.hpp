#pragma once

#include <stdexcept>
#include <string>

namespace aklt {

/// Machine-readable failure category; the CLI maps each one to an exit code.
enum class ErrorCategory { usage, domain, argument, size, estimation, io, check_failed };

const char* category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Parameter outside the range where an operator or distribution is defined.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorCategory::argument, what) {}
};

/// Problem too large for an exhaustive method.
class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorCategory::size, what) {}
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what) : Error(ErrorCategory::estimation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

/// Malformed or out-of-range command-line input.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

/// A numerical check ran to completion and did not meet its tolerance.
class CheckFailedError : public Error {
 public:
  explicit CheckFailedError(const std::string& what) : Error(ErrorCategory::check_failed, what) {}
};

}  // namespace aklt
