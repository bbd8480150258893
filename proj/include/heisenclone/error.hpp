#pragma once

#include <stdexcept>
#include <string>

namespace heisenclone {

enum class ErrorKind { validation, domain, resource, numeric, parse, construction };

const char* to_string(ErrorKind kind);

// Base of every error thrown by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, double requested = 0.0)
      : Error(ErrorKind::resource, what), requested_(requested) {}
  double requested() const noexcept { return requested_; }

 private:
  double requested_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& what) : Error(ErrorKind::construction, what) {}
};

}  // namespace heisenclone
