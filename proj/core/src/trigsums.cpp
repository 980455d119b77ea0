#include "amo/trigsums.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "amo/constants.hpp"
#include "amo/discriminant.hpp"

namespace amo {

namespace {

using cplx = std::complex<double>;

// e^{i pi num/den}
cplx unit_pi(std::int64_t num, std::int64_t den) { return {cos_pi_fraction(num, den), sin_pi_fraction(num, den)}; }

// e^{-2 pi i x} with x reduced to [-1/2, 1/2] first
cplx unit_turns(double x) {
  x -= std::nearbyint(x);
  const double a = -2.0 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

void check_ell(std::int64_t ell, const SumContext& ctx) {
  if (ell < 1 || ell > ctx.q - 1)
    throw std::invalid_argument("ell = " + std::to_string(ell) + " outside [1, q-1]");
}

}  // namespace

SumContext::SumContext(std::int64_t p_, std::int64_t q_, std::int64_t k_) : p(p_), q(q_), k(k_) {
  require_coprime(p, q);
  if (q % 2 == 0) throw std::invalid_argument("sum machinery needs odd q, got " + std::to_string(q));
  if (k < 0 || k > s()) throw std::invalid_argument("k = " + std::to_string(k) + " outside [0, (q-1)/2]");
}

double F(std::int64_t ell, const SumContext& ctx) {
  check_ell(ell, ctx);
  const std::int64_t pl = checked_mul(ctx.p, ell);
  return cos_pi_fraction(checked_mul(pl, 4 * ctx.k + 1), ctx.q) / cos_pi_fraction(pl, ctx.q);
}

double F_brute(std::int64_t ell, const SumContext& ctx) {
  check_ell(ell, ctx);
  CompensatedSum<double> acc;
  const std::int64_t base = checked_mul(4 * ell, ctx.p);
  for (std::int64_t j = 1; j <= ctx.s(); ++j) acc.add(cos_pi_fraction(checked_mul(base, j + ctx.k), ctx.q));
  return -2.0 * acc.value();
}

std::vector<double> F_table(const SumContext& ctx) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(ctx.q - 1));
  for (std::int64_t ell = 1; ell < ctx.q; ++ell) out.push_back(F(ell, ctx));
  return out;
}

double F_total(const SumContext& ctx) {
  CompensatedSum<double> acc;
  for (std::int64_t ell = 1; ell < ctx.q; ++ell) acc.add(F(ell, ctx));
  return acc.value();
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("digamma: argument must be positive and finite");
  double shift = 0.0;
  while (x < 10.0) {
    shift += 1.0 / x;
    x += 1.0;
  }
  // B_{2n}/(2n) for n = 1..7
  static constexpr double c[] = {1.0 / 12.0,     -1.0 / 120.0,  1.0 / 252.0,   -1.0 / 240.0,
                                 1.0 / 132.0,    -691.0 / 32760.0, 1.0 / 12.0};
  const double inv2 = 1.0 / (x * x);
  double series = 0.0, pw = inv2;
  for (double ci : c) {
    series += ci * pw;
    pw *= inv2;
  }
  return std::log(x) - 0.5 / x - series - shift;
}

double L_direct(const SumContext& ctx) {
  CompensatedSum<double> acc;
  for (std::int64_t j = 1; j <= ctx.s(); ++j) {
    const double v = 2.0 * sin_pi_fraction(checked_mul(2 * ctx.p, j + ctx.k), ctx.q);
    if (v == 0.0) throw std::domain_error("L_direct: sine argument is a multiple of pi");
    acc.add(std::log(std::fabs(v)));
  }
  return 2.0 * acc.value();
}

double digamma_sum(const SumContext& ctx) {
  CompensatedSum<double> acc;
  const double q = static_cast<double>(ctx.q);
  for (std::int64_t ell = 1; ell < ctx.q; ++ell) acc.add(F(ell, ctx) * digamma(1.0 + static_cast<double>(ell) / q));
  return acc.value() / q;
}

double S_k(const SumContext& ctx) {
  CompensatedSum<double> acc;
  for (std::int64_t m = 1; m < ctx.q; ++m) acc.add(F(m, ctx) / static_cast<double>(m));
  return acc.value();
}

double L_formula(const SumContext& ctx) {
  const double q = static_cast<double>(ctx.q);
  return -((q - 1.0) / q) * constants::gamma0 - digamma_sum(ctx) + S_k(ctx);
}

double sum_bound(std::int64_t q) {
  return (4.0 + constants::beta / std::numbers::ln2) * std::log(static_cast<double>(q)) + 9.0;
}

double digamma_sum_bound(std::int64_t q) { return constants::gamma0 * (std::log(static_cast<double>(q)) + 2.0); }

namespace {

template <class Phase>
cplx S_impl(const Fraction& f, Phase turns) {
  if (f.den % 2 == 0) throw std::invalid_argument("S needs odd q, got " + to_string(f));
  CompensatedSum<cplx> acc;
  for (std::int64_t m = 1; m < f.den; ++m) {
    const std::int64_t pm = checked_mul(f.num, m);
    acc.add(unit_pi(pm, f.den) * turns(m) / (static_cast<double>(m) * cos_pi_fraction(pm, f.den)));
  }
  return acc.value();
}

void check_T(const Fraction& f, int delta) {
  const bool p_odd = f.num % 2 != 0, q_odd = f.den % 2 != 0;
  if (delta == 0 && p_odd) return;
  if (delta == 1 && p_odd != q_odd) return;
  if (delta != 0 && delta != 1) throw std::invalid_argument("T undefined: delta must be 0 or 1");
  throw std::invalid_argument("T undefined for " + to_string(f) + " with delta = " + std::to_string(delta));
}

// turns(n) must return e^{-2 pi i gamma (n - 1/2)}
template <class Phase>
cplx T_impl(const Fraction& f, int delta, Phase turns) {
  check_T(f, delta);
  const double sgn = delta == 0 ? 1.0 : -1.0;
  CompensatedSum<cplx> acc;
  for (std::int64_t n = 1; n <= f.den; ++n) {
    const cplx sw = sgn * unit_pi(checked_mul(f.num, 2 * n - 1), f.den);
    acc.add(sw / (1.0 - sw) * turns(n) / (static_cast<double>(n) - 0.5));
  }
  return 2.0 * acc.value();
}

}  // namespace

cplx S_complex(const Fraction& f, double gamma) {
  return S_impl(f, [&](std::int64_t m) { return unit_turns(gamma * static_cast<double>(m)); });
}

cplx S_complex(const Fraction& f, const Fraction& gamma) {
  return S_impl(f, [&](std::int64_t m) { return unit_pi(-2 * checked_mul(gamma.num, m), gamma.den); });
}

cplx T_complex(const Fraction& f, double gamma, int delta) {
  return T_impl(f, delta, [&](std::int64_t n) { return unit_turns(gamma * (static_cast<double>(n) - 0.5)); });
}

cplx T_complex(const Fraction& f, const Fraction& gamma, int delta) {
  return T_impl(f, delta,
                [&](std::int64_t n) { return unit_pi(-checked_mul(gamma.num, 2 * n - 1), gamma.den); });
}

}  // namespace amo
