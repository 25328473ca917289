#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace levy::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 configuration or domain error, 2 a verification
/// check failed.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// "lo:hi:n" (linear), "lo:hi:nlog" (log-spaced), a single number, or a
/// comma-separated list.
std::vector<double> parse_grid(const std::string& expr);

}  // namespace levy::cli
