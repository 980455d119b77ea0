#pragma once

#include <mpfr.h>

#include <cmath>
#include <utility>

namespace amo::detail {

inline mpfr_prec_t digits_to_bits(int digits) { return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8; }

// Owning mpfr_t with an explicit precision (no global default is consulted).
class Mp {
 public:
  explicit Mp(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Mp(mpfr_prec_t bits, double x) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
  Mp(const Mp& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mp(Mp&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Mp& operator=(const Mp& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Mp& operator=(Mp&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }

 private:
  mpfr_t v_;
};

// cos(pi num/den) at the given precision, with the rational argument reduced first.
inline void cos_pi_rational(Mp& out, long long num, long long den) {
  const long long period = 2 * den;
  num %= period;
  if (num < 0) num += period;
  Mp t(out.precision());
  mpfr_const_pi(t.get(), MPFR_RNDN);
  mpfr_mul_si(t.get(), t.get(), num, MPFR_RNDN);
  mpfr_div_si(t.get(), t.get(), den, MPFR_RNDN);
  mpfr_cos(out.get(), t.get(), MPFR_RNDN);
}

}  // namespace amo::detail
