#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Argument outside the mathematical domain of a function (pole, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration: bad rational string, bad grid, bad window.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Index with no closed form in this library.
class UnsupportedIndex : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integrand produced NaN or infinity at a sample point.
class QuadError : public std::runtime_error {
 public:
  QuadError(const std::string& what, double at)
      : std::runtime_error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

/// Tabulation failed: quadrature at a node, or checkpoint accuracy.
class TabulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cache file could not be read back (version, checksum, malformed content).
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levy
