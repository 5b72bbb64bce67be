#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace himap {

// Classification used by callers (notably the CLI) to map failures onto
// exit codes without string matching.
enum class ErrorKind {
  domain,       // argument outside the operation's domain
  config,       // invalid configuration (depth, resolution, ...)
  data,         // malformed or empty input data
  weight,       // affine weights with non-positive total
  linalg,       // singular / ill-conditioned linear algebra
  bandwidth,    // kernel window too small for local weights
  resource,     // problem exceeds a hard size cap
  convergence,  // iterative solver failed to reach tolerance
  internal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class WeightError : public Error {
 public:
  explicit WeightError(const std::string& what) : Error(ErrorKind::weight, what) {}
};

class LinAlgError : public Error {
 public:
  LinAlgError(const std::string& what, double condition_number)
      : Error(ErrorKind::linalg, what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class BandwidthError : public Error {
 public:
  explicit BandwidthError(const std::string& what) : Error(ErrorKind::bandwidth, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

}  // namespace himap
