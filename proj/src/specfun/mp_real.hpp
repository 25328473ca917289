#pragma once

// Minimal RAII handle over an MPFR number. Every value carries its own
// precision; binary operations produce a result at the larger precision.

#include <mpfr.h>

#include <algorithm>
#include <utility>

namespace levy::sf::detail {

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  MpReal(double d, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, d, MPFR_RNDN); }
  /// Exact rational num/den rounded once.
  MpReal(long num, long den, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, num, MPFR_RNDN);
    mpfr_div_si(v_, v_, den, MPFR_RNDN);
  }
  MpReal(const MpReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Natural log of |value|; -inf for zero.
  double log_abs() const {
    MpReal t(prec());
    mpfr_abs(t.v_, v_, MPFR_RNDN);
    mpfr_log(t.v_, t.v_, MPFR_RNDN);
    return t.to_double();
  }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator*=(const MpReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& operator/=(const MpReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal& mul_si(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
  MpReal& div_si(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }

  friend MpReal operator+(MpReal a, const MpReal& b) { a.widen(b); return a += b; }
  friend MpReal operator-(MpReal a, const MpReal& b) { a.widen(b); return a -= b; }
  friend MpReal operator*(MpReal a, const MpReal& b) { a.widen(b); return a *= b; }
  friend MpReal operator/(MpReal a, const MpReal& b) { a.widen(b); return a /= b; }
  MpReal operator-() const { MpReal r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

  friend int compare_abs(const MpReal& a, const MpReal& b) { return mpfr_cmpabs(a.v_, b.v_); }

  static MpReal pi(mpfr_prec_t bits) { MpReal r(bits); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
  friend MpReal exp(MpReal a) { mpfr_exp(a.v_, a.v_, MPFR_RNDN); return a; }
  friend MpReal log(MpReal a) { mpfr_log(a.v_, a.v_, MPFR_RNDN); return a; }
  friend MpReal sqrt(MpReal a) { mpfr_sqrt(a.v_, a.v_, MPFR_RNDN); return a; }
  friend MpReal gamma(MpReal a) { mpfr_gamma(a.v_, a.v_, MPFR_RNDN); return a; }
  friend MpReal abs(MpReal a) { mpfr_abs(a.v_, a.v_, MPFR_RNDN); return a; }
  friend MpReal pow(MpReal a, const MpReal& e) { mpfr_pow(a.v_, a.v_, e.v_, MPFR_RNDN); return a; }

 private:
  void widen(const MpReal& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }
  mpfr_t v_;
};

}  // namespace levy::sf::detail
