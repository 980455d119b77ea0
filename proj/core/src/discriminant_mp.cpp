#include <cmath>

#include "amo/discriminant.hpp"
#include "mp.hpp"

namespace amo {

using detail::Mp;

namespace {

ScaledReal to_scaled(const Mp& x) {
  if (x.sign() == 0) return {};
  Mp a(x.precision());
  mpfr_abs(a.get(), x.get(), MPFR_RNDN);
  mpfr_log(a.get(), a.get(), MPFR_RNDN);
  return ScaledReal::from_log(x.sign(), a.to_double());
}

}  // namespace

ScaledReal Discriminant::sigma_mp(double E, int digits) const {
  const mpfr_prec_t bits = detail::digits_to_bits(digits);
  Mp a(bits, 1.0), b(bits, 0.0), c(bits, 0.0), d(bits, 1.0);
  Mp x(bits), v(bits), na(bits), nb(bits), e(bits, E);
  for (long long j = 1; j <= q_; ++j) {
    long long jp = static_cast<long long>((static_cast<__int128>(j) * (p_ % q_)) % q_);
    detail::cos_pi_rational(v, 4 * jp + 1, 2 * q_);
    mpfr_mul_2ui(v.get(), v.get(), 1, MPFR_RNDN);
    mpfr_sub(x.get(), e.get(), v.get(), MPFR_RNDN);
    // [a b; c d] <- [x -1; 1 0] [a b; c d]
    mpfr_mul(na.get(), x.get(), a.get(), MPFR_RNDN);
    mpfr_sub(na.get(), na.get(), c.get(), MPFR_RNDN);
    mpfr_mul(nb.get(), x.get(), b.get(), MPFR_RNDN);
    mpfr_sub(nb.get(), nb.get(), d.get(), MPFR_RNDN);
    mpfr_swap(c.get(), a.get());
    mpfr_swap(d.get(), b.get());
    mpfr_swap(a.get(), na.get());
    mpfr_swap(b.get(), nb.get());
  }
  Mp tr(bits);
  mpfr_add(tr.get(), a.get(), d.get(), MPFR_RNDN);
  mpfr_neg(tr.get(), tr.get(), MPFR_RNDN);
  return to_scaled(tr);
}

ScaledReal Discriminant::determinant_mp(double E, int digits) const {
  const mpfr_prec_t bits = detail::digits_to_bits(digits);
  Mp d0(bits, 1.0), d1(bits, -E), d2(bits), t(bits), b2(bits), e(bits, E);
  for (long long j = 1; j < q_; ++j) {
    long long jp = static_cast<long long>((static_cast<__int128>(j) * (p_ % q_)) % (2 * q_));
    // b_j = 2 sin(pi p j/q) = 2 cos(pi (2 jp - q)/(2q))
    detail::cos_pi_rational(b2, 2 * jp - q_, 2 * q_);
    mpfr_mul_2ui(b2.get(), b2.get(), 1, MPFR_RNDN);
    mpfr_sqr(b2.get(), b2.get(), MPFR_RNDN);
    mpfr_mul(d2.get(), e.get(), d1.get(), MPFR_RNDN);
    mpfr_neg(d2.get(), d2.get(), MPFR_RNDN);
    mpfr_mul(t.get(), b2.get(), d0.get(), MPFR_RNDN);
    mpfr_sub(d2.get(), d2.get(), t.get(), MPFR_RNDN);
    mpfr_swap(d0.get(), d1.get());
    mpfr_swap(d1.get(), d2.get());
  }
  return to_scaled(d1);
}

}  // namespace amo
