#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace levy {

/// Exact rational stability index alpha = l/k with gcd(l, k) = 1 and 0 < l < k.
class StableIndex {
 public:
  /// Throws ConfigError naming the violated constraint.
  StableIndex(long l, long k);

  /// Parses "l/k"; surrounding whitespace is not accepted.
  static StableIndex parse(std::string_view text);

  long num() const noexcept { return l_; }
  long den() const noexcept { return k_; }
  double value() const noexcept { return static_cast<double>(l_) / k_; }
  /// 1/alpha, the exponent in the scaled kernel t^{-1/alpha}.
  double inverse() const noexcept { return static_cast<double>(k_) / l_; }

  std::string str() const;

  friend StableIndex operator*(StableIndex a, StableIndex b);
  friend bool operator==(const StableIndex&, const StableIndex&) = default;
  friend std::strong_ordering operator<=>(const StableIndex& a, const StableIndex& b) {
    return a.l_ * b.k_ <=> b.l_ * a.k_;
  }

 private:
  long l_;
  long k_;
};

}  // namespace levy
