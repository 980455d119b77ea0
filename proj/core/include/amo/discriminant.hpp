#pragma once

#include <cstdint>
#include <vector>

#include "amo/scaled_real.hpp"

namespace amo {

// cos(pi num/den) and sin(pi num/den) with the argument reduced exactly
// before any rounding happens.
double cos_pi_fraction(std::int64_t num, std::int64_t den);
double sin_pi_fraction(std::int64_t num, std::int64_t den);

void require_coprime(std::int64_t p, std::int64_t q);

struct Consistency {
  double discrepancy = 0.0;  // |ln|a| - ln|b|| / max(1, |ln|a||, |ln|b||)
  bool signs_agree = true;
  bool multiprecision = false;  // double result exceeded the tolerance and was redone in MPFR
};

struct SigmaValue {
  ScaledReal value;
  ScaledReal derivative;
};

// Discriminant of the critical almost Mathieu operator at frequency p/q.
class Discriminant {
 public:
  Discriminant(std::int64_t p, std::int64_t q);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }

  // Diagonal entries 2cos(2 pi j p/q + pi/(2q)) of the transfer factors, j = 1..q.
  const std::vector<double>& potential() const { return v_; }
  // Off-diagonals b_j = 2 sin(pi p j/q), j = 1..q-1, and their squares.
  const std::vector<double>& offdiagonal() const { return b_; }
  const std::vector<double>& offdiagonal_squared() const { return b2_; }

  ScaledReal sigma(double E) const;
  SigmaValue sigma_with_derivative(double E) const;

  // det(H - E I) by the three-term recurrence. Equals (-1)^(q+1) sigma(E).
  ScaledReal determinant(double E) const;
  SigmaValue determinant_with_derivative(double E) const;

  // Same two evaluators carried out in MPFR with the given number of decimal digits.
  ScaledReal sigma_mp(double E, int digits) const;
  ScaledReal determinant_mp(double E, int digits) const;

  // See sigma_consistency and sigma_symmetry below.
  Consistency consistency(double E, double tol = 1e-9) const;
  Consistency symmetry(double E, double tol = 1e-10) const;

 private:
  std::int64_t p_, q_;
  std::vector<double> v_, b_, b2_;
};

ScaledReal sigma(std::int64_t p, std::int64_t q, double E);
std::vector<double> jacobi_offdiagonal(std::int64_t p, std::int64_t q);
ScaledReal jacobi_determinant(std::int64_t p, std::int64_t q, double E);

// Compares sigma against the determinant recurrence (with the (-1)^(q+1) sign).
// If the double discrepancy exceeds tol both sides are redone with 40 digits.
Consistency sigma_consistency(std::int64_t p, std::int64_t q, double E, double tol = 1e-9);
// sigma(E) against (-1)^q sigma(-E), with the same escalation rule.
Consistency sigma_symmetry(std::int64_t p, std::int64_t q, double E, double tol = 1e-10);
Consistency compare_scaled(const ScaledReal& a, const ScaledReal& b);

// L_k for k = 0..s, the logs of the squared products whose sum is |sigma'(0)|.
std::vector<double> sigma_prime0_log_terms(std::int64_t p, std::int64_t q);
// Sign from q mod 4 (+ for q = 3 mod 4, - for q = 1 mod 4, 0 for even q).
ScaledReal sigma_prime0(std::int64_t p, std::int64_t q);

// Derivative from forward-mode differentiation of the transfer product,
// cross-checked against the determinant recurrence and, if those disagree,
// a Richardson-extrapolated central difference. Throws std::runtime_error
// ("derivative unresolved") when no two methods agree.
ScaledReal sigma_prime(std::int64_t p, std::int64_t q, double E);

// Richardson-extrapolated central difference of sigma; used as a fallback and oracle.
double sigma_prime_finite_difference(std::int64_t p, std::int64_t q, double E);

// log-sum-exp of the given logs.
double log_sum_exp(const std::vector<double>& logs);

}  // namespace amo
