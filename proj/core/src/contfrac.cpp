#include "amo/contfrac.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amo {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in continued fraction arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in continued fraction arithmetic");
  return r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Fraction make_fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::string to_string(const Fraction& f) { return std::to_string(f.num) + "/" + std::to_string(f.den); }

ContinuedFraction parse_coefficients(std::string_view text) {
  ContinuedFraction cf;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i < text.size() && text[i] == '[') ++i;
  while (true) {
    skip_ws();
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec != std::errc()) throw std::invalid_argument("malformed continued fraction: '" + std::string(text) + "'");
    if (v < 1) throw std::invalid_argument("continued fraction coefficients must be >= 1");
    cf.a.push_back(v);
    i = static_cast<std::size_t>(ptr - text.data());
    skip_ws();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    if (i < text.size() && text[i] == ']') ++i;
    skip_ws();
    if (i != text.size()) throw std::invalid_argument("malformed continued fraction: '" + std::string(text) + "'");
    break;
  }
  return cf;
}

std::string to_string(const ContinuedFraction& cf) {
  std::string s = "[";
  for (std::size_t i = 0; i < cf.a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(cf.a[i]);
  }
  return s + "]";
}

ContinuedFraction expand(const Fraction& f_in) {
  Fraction f = make_fraction(f_in.num, f_in.den);
  if (f.num <= 0 || f.num > f.den) throw std::invalid_argument("frequency " + to_string(f_in) + " not in (0,1]");
  ContinuedFraction cf;
  // 1/x = a + r with x = num/den, so a = den / num.
  std::int64_t num = f.num, den = f.den;
  while (num != 0) {
    cf.a.push_back(den / num);
    std::int64_t r = den % num;
    den = num;
    num = r;
  }
  if (cf.a.size() >= 2 && cf.a.back() == 1) {
    cf.a.pop_back();
    cf.a.back() += 1;
  }
  return cf;
}

Fraction evaluate(const ContinuedFraction& cf) {
  if (cf.a.empty()) throw std::invalid_argument("empty continued fraction");
  return tails(cf).front();
}

std::vector<Fraction> convergents(const ContinuedFraction& cf) {
  std::vector<Fraction> out;
  out.reserve(cf.a.size());
  // seeds p_{-1}/q_{-1} = 1/0 and p_0/q_0 = 0/1
  std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (std::int64_t a : cf.a) {
    if (a < 1) throw std::invalid_argument("continued fraction coefficients must be >= 1");
    std::int64_t pn = checked_add(checked_mul(a, p), p_prev);
    std::int64_t qn = checked_add(checked_mul(a, q), q_prev);
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    out.push_back({p, q});
  }
  return out;
}

std::vector<Fraction> tails(const ContinuedFraction& cf) {
  std::size_t n = cf.a.size();
  std::vector<Fraction> t(n);
  // t_{n+1} = 0 = 0/1, t_j = 1/(a_j + t_{j+1}) = q'_{j+1} / (a_j q'_{j+1} + p'_{j+1}).
  std::int64_t pn = 0, qn = 1;
  for (std::size_t j = n; j-- > 0;) {
    if (cf.a[j] < 1) throw std::invalid_argument("continued fraction coefficients must be >= 1");
    std::int64_t den = checked_add(checked_mul(cf.a[j], qn), pn);
    t[j] = {qn, den};
    pn = qn;
    qn = den;
  }
  return t;
}

bool tail_product_identity(const ContinuedFraction& cf) {
  auto t = tails(cf);
  auto c = convergents(cf);
  Fraction prod{c.back().den, 1};
  for (const auto& f : t) {
    // cross-cancel before multiplying so intermediate values stay small
    std::int64_t g1 = gcd(prod.num, f.den), g2 = gcd(f.num, prod.den);
    prod = make_fraction(checked_mul(prod.num / g1, f.num / g2), checked_mul(prod.den / g2, f.den / g1));
  }
  return prod.num == 1 && prod.den == 1;
}

bool parity_check(const ContinuedFraction& cf) {
  if (cf.a.empty() || cf.a[0] % 2 == 0) return false;
  for (std::size_t k = 1; k < cf.a.size(); ++k)
    if (cf.a[k] % 2 != 0) return false;
  return true;
}

std::vector<GrowthRow> growth_check(const ContinuedFraction& cf, double kappa, double c3) {
  if (!(kappa > 2.0)) throw std::invalid_argument("growth_check requires kappa > 2");
  if (!(c3 > 0.0)) throw std::invalid_argument("growth_check requires c3 > 0");
  auto conv = convergents(cf);
  std::vector<GrowthRow> rows;
  for (std::size_t i = 0; i + 1 < conv.size(); ++i) {
    GrowthRow r;
    r.n = static_cast<int>(i + 1);
    r.q_n = conv[i].den;
    r.a_next = cf.a[i + 1];
    r.q_next = conv[i + 1].den;
    double lq = std::log(static_cast<double>(r.q_n));
    double rhs_a = std::log(c3) + (kappa - 2.0) * lq;
    double rhs_q = std::log(c3 / 2.0) + (kappa - 1.0) * lq;
    r.log_margin_coefficient = std::log(static_cast<double>(r.a_next)) - rhs_a;
    r.log_margin_denominator = std::log(static_cast<double>(r.q_next)) - rhs_q;
    r.coefficient_ok = r.log_margin_coefficient > 0.0;
    r.denominator_ok = r.log_margin_denominator > 0.0;
    rows.push_back(r);
  }
  return rows;
}

double length_bound_parity(std::int64_t q_n) { return std::log(static_cast<double>(q_n)) / std::log(2.0) + 1.0; }

double length_bound_growth(std::int64_t q_n, double nu) {
  if (!(nu > 1.0)) throw std::invalid_argument("growth exponent must exceed 1");
  double lq = std::log(static_cast<double>(q_n));
  if (lq <= std::log(3.0)) return 2.0;
  return std::log(lq / std::log(3.0)) / std::log(nu) + 2.0;
}

}  // namespace amo
