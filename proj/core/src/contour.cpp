#include "amo/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "amo/constants.hpp"
#include "amo/discriminant.hpp"
#include "amo/trigsums.hpp"

namespace amo {

namespace {

using cplx = std::complex<double>;

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  const unsigned un = static_cast<unsigned>(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double pn = std::legendre(un, x), pm = std::legendre(un - 1, x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double pn = std::legendre(un, x), pm = std::legendre(un - 1, x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const std::size_t a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(n - 1 - i);
    r.x[a] = -x;
    r.x[b] = x;
    r.w[a] = r.w[b] = w;
  }
  return r;
}

template <class G>
cplx panel(const G& g, const GaussRule& rule, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < rule.x.size(); ++i) acc.add(rule.w[i] * g(c + h * rule.x[i]));
  return h * acc.value();
}

template <class G>
cplx adaptive(const G& g, const GaussRule& rule, double a, double b, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const cplx left = panel(g, rule, a, m), right = panel(g, rule, m, b);
  const cplx halves = left + right;
  if (std::abs(halves - whole) <= tol) return halves;
  if (depth <= 0) throw std::runtime_error("quadrature unconverged");
  return adaptive(g, rule, a, m, left, 0.5 * tol, depth - 1) + adaptive(g, rule, m, b, right, 0.5 * tol, depth - 1);
}

// integral over x in [-X, X] of g(x)
template <class G>
cplx line_integral(const G& g, double X, double tol, const QuadratureConfig& cfg, const GaussRule& rule) {
  const double n_panels = std::ceil(2.0 * X / std::numbers::pi);
  const std::size_t n = static_cast<std::size_t>(n_panels);
  const double h = 2.0 * X / n_panels;
  const double panel_tol = tol / n_panels;
  CompensatedSum<cplx> acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -X + h * static_cast<double>(i), b = i + 1 == n ? X : a + h;
    acc.add(adaptive(g, rule, a, b, panel(g, rule, a, b), panel_tol, cfg.max_depth));
  }
  return acc.value();
}

void check_config(const QuadratureConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("quadrature tol must be positive");
  if (cfg.panel_order < 8) throw std::invalid_argument("panel_order must be at least 8");
}

void check_gamma(const Fraction& f, double gamma) {
  const double r = f.value();
  const double slack = 1e-12;
  if (!(gamma >= 0.5 * r - slack && gamma <= 1.0 + 0.5 * r + slack))
    throw std::domain_error("divergent tail: gamma = " + std::to_string(gamma) + " outside [r/2, 1 + r/2] for r = " +
                            to_string(f));
}

// Integrand h(z) of the contour integral; the value is the sum over both lines.
template <class H>
cplx contour_integral(const Fraction& f, const QuadratureConfig& cfg, const H& h) {
  check_config(cfg);
  const double r = f.value();
  const double X = (2.0 / r) * std::log(1.0 / cfg.tol) + cfg.truncation_margin;
  const GaussRule rule = gauss_legendre(cfg.panel_order);
  const double y1 = 0.5 * std::numbers::pi;
  const double y2 = 2.0 * std::numbers::pi * (static_cast<double>(f.den) - 0.25);
  const double tol = 0.5 * cfg.tol;
  const cplx lower = line_integral([&](double x) { return h(cplx(x, y1)); }, X, tol, cfg, rule);
  const cplx upper = line_integral([&](double x) { return h(cplx(x, y2)); }, X, tol, cfg, rule);
  return lower - upper;
}

}  // namespace

cplx I_integral(const Fraction& f, double gamma, const QuadratureConfig& cfg) {
  if (f.num <= 0 || f.den < 3 || f.den % 2 == 0 || gcd(f.num, f.den) != 1)
    throw std::invalid_argument("I needs reduced p/q with q odd >= 3, got " + to_string(f));
  check_gamma(f, gamma);
  const double r = f.value();
  return contour_integral(f, cfg, [&](cplx z) {
    if (z.real() <= 0.0)
      return -2.0 * std::exp((1.0 + r - gamma) * z) / ((1.0 + std::exp(r * z)) * (1.0 - std::exp(z)) * z);
    return -2.0 * std::exp(-gamma * z) / ((std::exp(-r * z) + 1.0) * (std::exp(-z) - 1.0) * z);
  });
}

cplx J_integral(const Fraction& f, double gamma, int delta, const QuadratureConfig& cfg) {
  if (f.num <= 0 || f.den < 2 || gcd(f.num, f.den) != 1)
    throw std::invalid_argument("J needs reduced p/q with q >= 2, got " + to_string(f));
  const bool p_odd = f.num % 2 != 0, q_odd = f.den % 2 != 0;
  if (!((delta == 0 && p_odd) || (delta == 1 && p_odd != q_odd)))
    throw std::invalid_argument("J undefined for " + to_string(f) + " with delta = " + std::to_string(delta));
  check_gamma(f, gamma);
  const double r = f.value();
  const double s = delta == 0 ? 1.0 : -1.0;
  return contour_integral(f, cfg, [&](cplx z) {
    if (z.real() <= 0.0)
      return 2.0 * s * std::exp((1.0 + r - gamma) * z) / ((1.0 - s * std::exp(r * z)) * (1.0 + std::exp(z)) * z);
    return 2.0 * s * std::exp(-gamma * z) / ((std::exp(-r * z) - s) * (std::exp(-z) + 1.0) * z);
  });
}

double I_bound(const Fraction& f) {
  const double p = static_cast<double>(f.num), q = static_cast<double>(f.den);
  return 4.0 * std::log(q / p) + 5.0 / (std::numbers::e * std::numbers::pi * p) + constants::beta;
}

double J_bound(const Fraction& f, int delta) {
  if (delta == 1) return I_bound(f);
  const double c = cos_pi_fraction(f.num, f.den);
  return I_bound(f) / std::sqrt(1.0 - c * c);
}

NormalizedGamma normalize_gamma(const Fraction& t, double raw) {
  if (!(t.num > 0 && t.num <= t.den)) throw std::invalid_argument("normalize_gamma needs 0 < t <= 1");
  NormalizedGamma out;
  out.k_shift = static_cast<std::int64_t>(std::ceil(0.5 * t.value() - raw));
  out.gamma = raw + static_cast<double>(out.k_shift);
  out.eps = static_cast<int>(((out.k_shift % 2) + 2) % 2);
  return out;
}

NormalizedRational normalize_gamma(const Fraction& t, const Fraction& raw) {
  if (!(t.num > 0 && t.num <= t.den)) throw std::invalid_argument("normalize_gamma needs 0 < t <= 1");
  // t/2 - raw = num/den
  const std::int64_t num = checked_add(checked_mul(t.num, raw.den), -checked_mul(2 * raw.num, t.den));
  const std::int64_t den = checked_mul(2 * t.den, raw.den);
  std::int64_t k = num / den;
  if (num % den != 0 && num > 0) ++k;
  NormalizedRational out;
  out.k_shift = k;
  out.gamma = make_fraction(checked_add(raw.num, checked_mul(k, raw.den)), raw.den);
  out.eps = static_cast<int>(((k % 2) + 2) % 2);
  return out;
}

namespace {

cplx unit_pi(const Fraction& x) { return {cos_pi_fraction(x.num, x.den), sin_pi_fraction(x.num, x.den)}; }

Fraction mul(const Fraction& a, const Fraction& b) {
  const std::int64_t g1 = gcd(a.num, b.den), g2 = gcd(b.num, a.den);
  return make_fraction(checked_mul(a.num / g1, b.num / g2), checked_mul(a.den / g2, b.den / g1));
}

}  // namespace

RecursionResult recursion_check(const ContinuedFraction& cf, std::int64_t k, const QuadratureConfig& cfg) {
  if (!parity_check(cf)) throw std::invalid_argument("parity condition violated for " + to_string(cf));
  const std::vector<Fraction> t = tails(cf);
  const Fraction& t1 = t.front();
  if (t1.den < 3) throw std::invalid_argument("recursion needs q >= 3");
  const SumContext ctx(t1.num, t1.den, k);  // validates k

  RecursionResult res;
  res.cf = cf;
  res.k = k;
  const std::size_t n = cf.size();

  NormalizedRational g = normalize_gamma(t1, make_fraction(-2 * k * t1.num, t1.den));
  RecursionLevel first;
  first.j = 1;
  first.t = t1;
  first.gamma = g.gamma;
  first.k_shift = g.k_shift;
  first.eps = g.eps;
  first.delta = 0;
  first.coefficient = 1;
  first.integral = I_integral(t1, g.gamma.value(), cfg);
  first.bound = I_bound(t1);
  res.levels.push_back(first);
  res.lhs = S_complex(t1, g.gamma);

  CompensatedSum<cplx> rhs;
  rhs.add(first.integral);
  int coef = 1;
  for (std::size_t j = 2; j <= n; ++j) {
    const Fraction& tj = t[j - 1];
    const Fraction& prev = t[j - 2];
    const Fraction raw = mul(g.gamma, make_fraction(prev.den, prev.num));
    g = normalize_gamma(tj, raw);
    const int sign_eps = g.eps ? -1 : 1;
    coef = j == 2 ? sign_eps : -coef * sign_eps;
    RecursionLevel lv;
    lv.j = static_cast<int>(j);
    lv.t = tj;
    lv.gamma = g.gamma;
    lv.k_shift = g.k_shift;
    lv.eps = g.eps;
    lv.delta = 1;
    lv.coefficient = coef;
    lv.integral = J_integral(tj, g.gamma.value(), 1, cfg);
    lv.bound = J_bound(tj, 1);
    rhs.add(static_cast<double>(coef) * lv.integral);
    res.levels.push_back(lv);
  }
  // e^{-i pi gamma_n a_n}
  const Fraction phase = mul(g.gamma, make_fraction(-cf.a.back(), 1));
  res.boundary = n == 1 ? -2.0 * unit_pi(phase) : 2.0 * static_cast<double>(coef) * unit_pi(phase);
  rhs.add(res.boundary);
  res.rhs = rhs.value();
  res.residual = std::abs(res.lhs - res.rhs);
  for (const auto& lv : res.levels)
    if (!(std::abs(lv.integral) < lv.bound)) res.bounds_ok = false;
  return res;
}

SumBoundReport sum_bound_check(const ContinuedFraction& cf, std::int64_t k) {
  if (!parity_check(cf)) throw std::invalid_argument("parity condition violated for " + to_string(cf));
  const Fraction f = evaluate(cf);
  SumBoundReport r;
  r.q = f.den;
  r.k = k;
  r.abs_S_k = std::fabs(S_k(SumContext(f.num, f.den, k)));
  r.bound = sum_bound(f.den);
  r.slack = r.bound - r.abs_S_k;
  return r;
}

}  // namespace amo
