#include "amo/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "amo/contfrac.hpp"

namespace amo {

namespace {

using i128 = __int128;

// cos(pi n/d) for d > 0.
double cos_pi_reduced(i128 n, i128 d) {
  const i128 period = 2 * d;
  n %= period;
  if (n < 0) n += period;
  if (n > d) n = period - n;  // cos(pi(2 - x)) = cos(pi x), now x in [0, 1]
  const double pi = std::numbers::pi;
  if (4 * n <= d) return std::cos(pi * static_cast<double>(n) / static_cast<double>(d));
  if (4 * n >= 3 * d) return -std::cos(pi * static_cast<double>(d - n) / static_cast<double>(d));
  return std::sin(pi * static_cast<double>(d - 2 * n) / static_cast<double>(2 * d));
}

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;
};

// Rescale by a power of two so the largest entry of m lies in [1/2, 1).
int rescale_exponent(double mx) {
  int e = 0;
  std::frexp(mx, &e);
  return e;
}

}  // namespace

double cos_pi_fraction(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("cos_pi_fraction: denominator must be positive");
  return cos_pi_reduced(num, den);
}

double sin_pi_fraction(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("sin_pi_fraction: denominator must be positive");
  return cos_pi_reduced(2 * static_cast<i128>(num) - den, 2 * static_cast<i128>(den));
}

void require_coprime(std::int64_t p, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("denominator q must be >= 1");
  if (p < 0) throw std::invalid_argument("numerator p must be >= 0");
  if (gcd(p, q) != 1) throw std::invalid_argument(std::to_string(p) + "/" + std::to_string(q) + " is not in lowest terms");
}

Discriminant::Discriminant(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  require_coprime(p, q);
  v_.resize(static_cast<std::size_t>(q));
  const i128 pp = p % q;
  for (std::int64_t j = 1; j <= q; ++j) {
    // 2 pi j p/q + pi/(2q) = pi (4 (jp mod q) + 1) / (2q)
    i128 jp = (static_cast<i128>(j) * pp) % q;
    v_[static_cast<std::size_t>(j - 1)] = 2.0 * cos_pi_reduced(4 * jp + 1, 2 * static_cast<i128>(q));
  }
  if (q > 1) {
    b_.resize(static_cast<std::size_t>(q - 1));
    b2_.resize(static_cast<std::size_t>(q - 1));
    for (std::int64_t j = 1; j < q; ++j) {
      i128 jp = (static_cast<i128>(j) * pp) % (2 * static_cast<i128>(q));
      double b = 2.0 * cos_pi_reduced(2 * jp - q, 2 * static_cast<i128>(q));
      b_[static_cast<std::size_t>(j - 1)] = b;
      b2_[static_cast<std::size_t>(j - 1)] = b * b;
    }
  }
}

ScaledReal Discriminant::sigma(double E) const {
  Mat2 m;
  std::int64_t e2 = 0;
  for (double v : v_) {
    const double x = E - v;
    Mat2 n{x * m.a - m.c, x * m.b - m.d, m.a, m.b};
    m = n;
    double mx = std::max({std::fabs(m.a), std::fabs(m.b), std::fabs(m.c), std::fabs(m.d)});
    if (mx > 0x1p+60 || mx < 0x1p-60) {
      int e = rescale_exponent(mx);
      m.a = std::ldexp(m.a, -e);
      m.b = std::ldexp(m.b, -e);
      m.c = std::ldexp(m.c, -e);
      m.d = std::ldexp(m.d, -e);
      e2 += e;
    }
  }
  const double tr = -(m.a + m.d);
  if (tr == 0.0) return {};
  return ScaledReal::from_log(tr > 0 ? 1 : -1, std::log(std::fabs(tr)) + static_cast<double>(e2) * std::numbers::ln2);
}

SigmaValue Discriminant::sigma_with_derivative(double E) const {
  Mat2 m, dm{0, 0, 0, 0};
  std::int64_t e2 = 0;
  for (double v : v_) {
    const double x = E - v;
    Mat2 n{x * m.a - m.c, x * m.b - m.d, m.a, m.b};
    Mat2 dn{m.a + x * dm.a - dm.c, m.b + x * dm.b - dm.d, dm.a, dm.b};
    m = n;
    dm = dn;
    double mx = std::max({std::fabs(m.a), std::fabs(m.b), std::fabs(m.c), std::fabs(m.d), std::fabs(dm.a),
                          std::fabs(dm.b), std::fabs(dm.c), std::fabs(dm.d)});
    if (mx > 0x1p+60 || mx < 0x1p-60) {
      int e = rescale_exponent(mx);
      for (double* z : {&m.a, &m.b, &m.c, &m.d, &dm.a, &dm.b, &dm.c, &dm.d}) *z = std::ldexp(*z, -e);
      e2 += e;
    }
  }
  const double shift = static_cast<double>(e2) * std::numbers::ln2;
  auto pack = [&](double t) {
    if (t == 0.0) return ScaledReal{};
    return ScaledReal::from_log(t > 0 ? 1 : -1, std::log(std::fabs(t)) + shift);
  };
  return {pack(-(m.a + m.d)), pack(-(dm.a + dm.d))};
}

ScaledReal Discriminant::determinant(double E) const {
  return determinant_with_derivative(E).value;
}

SigmaValue Discriminant::determinant_with_derivative(double E) const {
  // D_k = -E D_{k-1} - b_{k-1}^2 D_{k-2}
  double d0 = 1.0, d1 = -E, dd0 = 0.0, dd1 = -1.0;
  std::int64_t e2 = 0;
  for (double b2 : b2_) {
    double d2 = -E * d1 - b2 * d0;
    double dd2 = -d1 - E * dd1 - b2 * dd0;
    d0 = d1;
    d1 = d2;
    dd0 = dd1;
    dd1 = dd2;
    double mx = std::max({std::fabs(d0), std::fabs(d1), std::fabs(dd0), std::fabs(dd1)});
    if (mx > 0x1p+60 || (mx < 0x1p-60 && mx > 0.0)) {
      int e = rescale_exponent(mx);
      d0 = std::ldexp(d0, -e);
      d1 = std::ldexp(d1, -e);
      dd0 = std::ldexp(dd0, -e);
      dd1 = std::ldexp(dd1, -e);
      e2 += e;
    }
  }
  const double shift = static_cast<double>(e2) * std::numbers::ln2;
  auto pack = [&](double t) {
    if (t == 0.0) return ScaledReal{};
    return ScaledReal::from_log(t > 0 ? 1 : -1, std::log(std::fabs(t)) + shift);
  };
  return {pack(d1), pack(dd1)};
}

ScaledReal sigma(std::int64_t p, std::int64_t q, double E) { return Discriminant(p, q).sigma(E); }

std::vector<double> jacobi_offdiagonal(std::int64_t p, std::int64_t q) { return Discriminant(p, q).offdiagonal(); }

ScaledReal jacobi_determinant(std::int64_t p, std::int64_t q, double E) { return Discriminant(p, q).determinant(E); }

Consistency compare_scaled(const ScaledReal& a, const ScaledReal& b) {
  Consistency c;
  c.signs_agree = a.sign == b.sign;
  if (a.sign == 0 && b.sign == 0) return c;
  if (a.sign == 0 || b.sign == 0) {
    c.discrepancy = std::numeric_limits<double>::infinity();
    return c;
  }
  double diff = std::fabs(a.log_mag - b.log_mag);
  c.discrepancy = diff == 0.0 ? 0.0 : diff / std::max({1.0, std::fabs(a.log_mag), std::fabs(b.log_mag)});
  return c;
}

Consistency Discriminant::consistency(double E, double tol) const {
  ScaledReal det = determinant(E);
  if (q_ % 2 == 0) det = -det;
  Consistency c = compare_scaled(sigma(E), det);
  if (c.signs_agree && c.discrepancy <= tol) return c;
  det = determinant_mp(E, 40);
  if (q_ % 2 == 0) det = -det;
  c = compare_scaled(sigma_mp(E, 40), det);
  c.multiprecision = true;
  return c;
}

Consistency Discriminant::symmetry(double E, double tol) const {
  ScaledReal mirror = sigma(-E);
  if (q_ % 2 == 1) mirror = -mirror;
  Consistency c = compare_scaled(sigma(E), mirror);
  if (c.signs_agree && c.discrepancy <= tol) return c;
  mirror = sigma_mp(-E, 40);
  if (q_ % 2 == 1) mirror = -mirror;
  c = compare_scaled(sigma_mp(E, 40), mirror);
  c.multiprecision = true;
  return c;
}

Consistency sigma_consistency(std::int64_t p, std::int64_t q, double E, double tol) {
  return Discriminant(p, q).consistency(E, tol);
}

Consistency sigma_symmetry(std::int64_t p, std::int64_t q, double E, double tol) {
  return Discriminant(p, q).symmetry(E, tol);
}

double log_sum_exp(const std::vector<double>& logs) {
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  double mx = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - mx);
  return mx + std::log(s);
}

std::vector<double> sigma_prime0_log_terms(std::int64_t p, std::int64_t q) {
  require_coprime(p, q);
  if (q % 2 == 0) throw std::invalid_argument("sigma'(0) log terms need odd q");
  const std::int64_t s = (q - 1) / 2;
  // odd_[j] = ln|2 sin(pi p (2j-1)/q)|, even_[j] = ln|2 sin(pi p 2j/q)|, j = 1..s
  std::vector<double> odd_prefix(static_cast<std::size_t>(s + 1), 0.0), even_suffix(static_cast<std::size_t>(s + 2), 0.0);
  const i128 pp = p % q;
  auto lsin = [&](i128 m) {
    i128 r = (pp * m) % (2 * static_cast<i128>(q));
    return std::log(std::fabs(2.0 * cos_pi_reduced(2 * r - q, 2 * static_cast<i128>(q))));
  };
  for (std::int64_t j = 1; j <= s; ++j) odd_prefix[static_cast<std::size_t>(j)] = odd_prefix[static_cast<std::size_t>(j - 1)] + lsin(2 * j - 1);
  for (std::int64_t j = s; j >= 1; --j) even_suffix[static_cast<std::size_t>(j)] = even_suffix[static_cast<std::size_t>(j + 1)] + lsin(2 * j);
  std::vector<double> L(static_cast<std::size_t>(s + 1));
  for (std::int64_t k = 0; k <= s; ++k)
    L[static_cast<std::size_t>(k)] = 2.0 * (odd_prefix[static_cast<std::size_t>(k)] + even_suffix[static_cast<std::size_t>(k + 1)]);
  return L;
}

ScaledReal sigma_prime0(std::int64_t p, std::int64_t q) {
  require_coprime(p, q);
  if (q % 2 == 0) return {};
  const int sign = (q % 4 == 3) ? 1 : -1;
  return ScaledReal::from_log(sign, log_sum_exp(sigma_prime0_log_terms(p, q)));
}

double sigma_prime_finite_difference(std::int64_t p, std::int64_t q, double E) {
  Discriminant d(p, q);
  const double h = std::max(1e-6, 1e-6 * std::fabs(E));
  auto central = [&](double hh) { return (d.sigma(E + hh).to_double() - d.sigma(E - hh).to_double()) / (2.0 * hh); };
  const double coarse = central(h), fine = central(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

ScaledReal sigma_prime(std::int64_t p, std::int64_t q, double E) {
  Discriminant d(p, q);
  const ScaledReal ad = d.sigma_with_derivative(E).derivative;
  ScaledReal rec = d.determinant_with_derivative(E).derivative;
  if (q % 2 == 0) rec = -rec;
  auto agree = [](const ScaledReal& a, const ScaledReal& b, double tol) {
    if (a.sign == 0 && b.sign == 0) return true;
    if (a.sign != b.sign) return false;
    return std::fabs(a.log_mag - b.log_mag) < tol;
  };
  if (agree(ad, rec, 1e-8)) return ad;
  const ScaledReal fd = ScaledReal::from_double(sigma_prime_finite_difference(p, q, E));
  if (agree(ad, fd, 1e-6)) return ad;
  if (agree(rec, fd, 1e-6)) return rec;
  throw std::runtime_error("derivative unresolved at E = " + std::to_string(E));
}

}  // namespace amo
