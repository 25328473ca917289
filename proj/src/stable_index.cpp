#include "levy/stable_index.hpp"

#include <charconv>
#include <numeric>

#include "levy/error.hpp"

namespace levy {

StableIndex::StableIndex(long l, long k) : l_(l), k_(k) {
  if (l <= 0 || k <= 0)
    throw ConfigError("stable index " + std::to_string(l) + "/" + std::to_string(k) +
                      ": l and k must be positive");
  if (l >= k)
    throw ConfigError("stable index " + std::to_string(l) + "/" + std::to_string(k) +
                      ": requires l < k");
  if (std::gcd(l, k) != 1)
    throw ConfigError("stable index " + std::to_string(l) + "/" + std::to_string(k) +
                      ": requires gcd(l, k) = 1");
}

StableIndex StableIndex::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    throw ConfigError("stable index '" + std::string(text) + "': expected l/k");
  auto read = [&](std::string_view part) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
      throw ConfigError("stable index '" + std::string(text) + "': expected l/k");
    return v;
  };
  return StableIndex(read(text.substr(0, slash)), read(text.substr(slash + 1)));
}

std::string StableIndex::str() const {
  return std::to_string(l_) + "/" + std::to_string(k_);
}

StableIndex operator*(StableIndex a, StableIndex b) {
  long l = a.l_ * b.l_;
  long k = a.k_ * b.k_;
  const long g = std::gcd(l, k);
  return StableIndex(l / g, k / g);
}

}  // namespace levy
