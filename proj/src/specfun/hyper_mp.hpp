#pragma once

#include <cstddef>
#include <vector>

#include "mp_real.hpp"

namespace levy::sf::detail {

struct MpSeries {
  MpReal value;
  MpReal max_partial;  // largest |partial sum| seen; cancellation = max_partial/|value|
  std::size_t terms = 0;
  bool converged = false;
};

/// pFq summed entirely at the working precision of `z`.
MpSeries hyper_pfq_mp(const std::vector<MpReal>& numer, const std::vector<MpReal>& denom,
                      const MpReal& z, std::size_t max_terms);

}  // namespace levy::sf::detail
