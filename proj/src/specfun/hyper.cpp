#include <cmath>
#include <limits>
#include <string>

#include "hyper_mp.hpp"
#include "levy/error.hpp"
#include "levy/specfun.hpp"

namespace levy::sf {
namespace detail {

MpSeries hyper_pfq_mp(const std::vector<MpReal>& numer, const std::vector<MpReal>& denom,
                      const MpReal& z, std::size_t max_terms) {
  const mpfr_prec_t bits = z.prec();
  MpSeries out{MpReal(1.0, bits), MpReal(1.0, bits)};
  MpReal term(1.0, bits);
  MpReal factor(bits);
  MpReal shifted(bits);
  int small = 0;
  for (std::size_t n = 0; n < max_terms; ++n) {
    mpfr_set(factor.get(), z.get(), MPFR_RNDN);
    for (const auto& a : numer) {
      mpfr_add_ui(shifted.get(), a.get(), n, MPFR_RNDN);
      factor *= shifted;
    }
    for (const auto& b : denom) {
      mpfr_add_ui(shifted.get(), b.get(), n, MPFR_RNDN);
      factor /= shifted;
    }
    factor.div_si(static_cast<long>(n + 1));
    term *= factor;
    out.value += term;
    out.terms = n + 1;
    if (compare_abs(out.value, out.max_partial) > 0) out.max_partial = abs(out.value);
    if (term.is_zero()) {
      out.converged = true;
      return out;
    }
    // |term| < 2^-bits |sum| three times in a row, with a contracting ratio.
    const bool tiny = !out.value.is_zero() &&
                      mpfr_get_exp(term.get()) + bits < mpfr_get_exp(out.value.get());
    small = tiny ? small + 1 : 0;
    if (small >= 3 && mpfr_cmp_ui(abs(factor).get(), 1) < 0) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace detail

namespace {

void validate(const HyperParams& params) {
  for (double b : params.denom) {
    if (b == 0.0 || (b < 0.0 && b == std::floor(b)))
      throw DomainError("hyper_pfq: lower parameter " + std::to_string(b) +
                        " is zero or a negative integer");
  }
  if (params.numer.size() > params.denom.size() + 1)
    throw DomainError("hyper_pfq: p > q + 1, series diverges");
  if (params.numer.size() == params.denom.size() + 1 && std::fabs(params.arg) >= 1.0)
    throw DomainError("hyper_pfq: p = q + 1 requires |arg| < 1");
  if (!std::isfinite(params.arg)) throw DomainError("hyper_pfq: non-finite argument");
}

long double term_ratio(const HyperParams& params, std::size_t n) {
  long double r = params.arg / static_cast<long double>(n + 1);
  for (double a : params.numer) r *= (a + static_cast<long double>(n));
  for (double b : params.denom) r /= (b + static_cast<long double>(n));
  return r;
}

struct LongSum {
  long double sum = 1.0L;
  long double max_partial = 1.0L;
  long double tail = 0.0L;
  double log_max_term = 0.0;
  std::size_t terms = 0;
  bool stopped = false;   // stopping rule satisfied
  bool overflow = false;
};

LongSum sum_long(const HyperParams& params, double tol, std::size_t max_terms) {
  LongSum s;
  long double term = 1.0L;
  double log_term = 0.0;
  int small = 0;
  for (std::size_t n = 0; n < max_terms; ++n) {
    const long double r = term_ratio(params, n);
    // term_{n+1} = term_n * r; the recurrence is the definition of the term.
    term *= r;
    if (r != 0.0L) log_term += std::log(std::fabs(static_cast<double>(r)));
    s.log_max_term = std::max(s.log_max_term, log_term);
    s.sum += term;
    s.terms = n + 1;
    if (!std::isfinite(s.sum)) {
      s.overflow = true;
      return s;
    }
    s.max_partial = std::max(s.max_partial, std::fabs(s.sum));
    if (term == 0.0L) {  // terminating series
      s.stopped = true;
      return s;
    }
    small = (std::fabs(term) <= tol * std::fabs(s.sum)) ? small + 1 : 0;
    if (small >= 3) {
      const long double r1 = std::fabs(term_ratio(params, n + 1));
      const long double r2 = std::fabs(term_ratio(params, n + 2));
      if (r1 < 1.0L && r2 <= r1) {
        s.tail = std::fabs(term) * r1 / (1.0L - r1);
        if (s.tail <= tol * std::fabs(s.sum)) {
          s.stopped = true;
          return s;
        }
      }
    }
  }
  return s;
}

}  // namespace

SeriesResult hyper_pfq(const HyperParams& params, double target_rel_tol,
                       const SeriesOptions& options) {
  validate(params);
  if (params.arg == 0.0) return {1.0, 1, 0.0, true};

  const double tol = std::max(target_rel_tol, 1e-18);
  const LongSum s = sum_long(params, tol, options.max_terms);
  constexpr double kEpsLong = std::numeric_limits<long double>::epsilon();

  double cancellation = std::numeric_limits<double>::infinity();
  if (!s.overflow && s.sum != 0.0L)
    cancellation = static_cast<double>(s.max_partial / std::fabs(s.sum));

  if (!s.overflow && cancellation <= options.cancellation_limit) {
    SeriesResult r;
    r.value = static_cast<double>(s.sum);
    r.terms_used = s.terms;
    const double tail_rel = s.sum != 0.0L ? static_cast<double>(s.tail / std::fabs(s.sum)) : 0.0;
    r.est_rel_error = std::max(tail_rel, 4.0 * cancellation * kEpsLong) +
                      std::numeric_limits<double>::epsilon();
    r.converged = s.stopped && r.est_rel_error <= target_rel_tol;
    if (!s.stopped) r.est_rel_error = std::max(r.est_rel_error, 1.0);
    return r;
  }

  // Multiple-precision fallback. Start from the largest-term magnitude and
  // add bits until the measured cancellation is covered.
  double extra_bits = std::max(0.0, s.log_max_term / std::log(2.0));
  if (!s.overflow && std::isfinite(cancellation)) extra_bits = std::max(extra_bits, std::log2(cancellation));
  for (int attempt = 0; attempt < 4; ++attempt) {
    const auto bits = static_cast<mpfr_prec_t>(96 + extra_bits * (1 + attempt));
    std::vector<detail::MpReal> a, b;
    for (double v : params.numer) a.emplace_back(v, bits);
    for (double v : params.denom) b.emplace_back(v, bits);
    const detail::MpReal z(params.arg, bits);
    auto mp = detail::hyper_pfq_mp(a, b, z, options.max_terms);
    if (mp.value.is_zero()) continue;
    const double log_cancel = mp.max_partial.log_abs() - mp.value.log_abs();
    const double rounding = std::exp(log_cancel - static_cast<double>(bits) * std::log(2.0) + 3.0);
    SeriesResult r;
    r.value = mp.value.to_double();
    r.terms_used = mp.terms;
    r.est_rel_error = rounding + std::numeric_limits<double>::epsilon();
    r.converged = mp.converged && r.est_rel_error <= target_rel_tol;
    if (r.converged || !mp.converged) return r;
    extra_bits = std::max(extra_bits, log_cancel / std::log(2.0));
  }
  return {std::numeric_limits<double>::quiet_NaN(), options.max_terms,
          std::numeric_limits<double>::infinity(), false};
}

}  // namespace levy::sf
