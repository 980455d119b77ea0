#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "amo/contfrac.hpp"

namespace amo {

struct QuadratureConfig {
  double tol = 1e-10;  // absolute
  int panel_order = 16;
  double truncation_margin = 20.0;
  int max_depth = 12;  // bisections allowed per panel
};

// Both integrals run over the lines Im z = pi/2 (left to right) and
// Im z = 2 pi (q - 1/4) (right to left). gamma must lie in [r/2, 1 + r/2],
// r = p/q, otherwise std::domain_error("divergent tail").
std::complex<double> I_integral(const Fraction& f, double gamma, const QuadratureConfig& cfg = {});
std::complex<double> J_integral(const Fraction& f, double gamma, int delta, const QuadratureConfig& cfg = {});

// 4 ln(q/p) + 5/(e pi p) + beta, and the delta-dependent multiple of it for J.
double I_bound(const Fraction& f);
double J_bound(const Fraction& f, int delta);

struct NormalizedGamma {
  double gamma = 0.0;
  std::int64_t k_shift = 0;
  int eps = 0;  // k_shift mod 2
};

// gamma = raw + k_shift in [t/2, 1 + t/2]; on a tie the lower shift wins.
NormalizedGamma normalize_gamma(const Fraction& t, double raw);

struct NormalizedRational {
  Fraction gamma;
  std::int64_t k_shift = 0;
  int eps = 0;
};
NormalizedRational normalize_gamma(const Fraction& t, const Fraction& raw);

struct RecursionLevel {
  int j = 0;            // 1-based
  Fraction t;           // [a_j, ..., a_n]
  Fraction gamma;
  std::int64_t k_shift = 0;
  int eps = 0;
  int delta = 1;
  int coefficient = 1;  // sign multiplying this level's integral
  std::complex<double> integral;  // I at j = 1, J(t_j, gamma_j, 1) after
  double bound = 0.0;
};

struct RecursionResult {
  ContinuedFraction cf;
  std::int64_t k = 0;
  std::vector<RecursionLevel> levels;
  std::complex<double> boundary;
  std::complex<double> lhs, rhs;
  double residual = 0.0;
  bool bounds_ok = true;
};

// Certifies S(p/q, gamma_1) = I(t_1, gamma_1) + sum_j (+-) J(t_j, gamma_j, 1) + boundary.
// Requires the parity condition on cf and q >= 3.
RecursionResult recursion_check(const ContinuedFraction& cf, std::int64_t k, const QuadratureConfig& cfg = {});

struct SumBoundReport {
  std::int64_t q = 0, k = 0;
  double abs_S_k = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};
SumBoundReport sum_bound_check(const ContinuedFraction& cf, std::int64_t k);

}  // namespace amo
