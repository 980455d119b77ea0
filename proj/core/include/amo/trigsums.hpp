#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "amo/contfrac.hpp"

namespace amo {

// p/q coprime with q odd, and 0 <= k <= s = (q-1)/2.
struct SumContext {
  std::int64_t p = 1, q = 1, k = 0;

  SumContext() = default;
  SumContext(std::int64_t p, std::int64_t q, std::int64_t k);
  std::int64_t s() const { return (q - 1) / 2; }
};

double F(std::int64_t ell, const SumContext& ctx);
double F_brute(std::int64_t ell, const SumContext& ctx);
std::vector<double> F_table(const SumContext& ctx);  // ell = 1..q-1
double F_total(const SumContext& ctx);

// Euler's psi for x > 0; throws std::domain_error otherwise.
double digamma(double x);

double L_direct(const SumContext& ctx);
double L_formula(const SumContext& ctx);
// (1/q) sum_ell F(ell,k) psi(1 + ell/q)
double digamma_sum(const SumContext& ctx);
double S_k(const SumContext& ctx);

// (4 + beta/ln 2) ln q + 9
double sum_bound(std::int64_t q);
// gamma0 (ln q + 2)
double digamma_sum_bound(std::int64_t q);

std::complex<double> S_complex(const Fraction& f, double gamma);
std::complex<double> S_complex(const Fraction& f, const Fraction& gamma);

// Throws std::invalid_argument("T undefined ...") unless p is odd (delta = 0)
// or p and q have opposite parity (delta = 1).
std::complex<double> T_complex(const Fraction& f, double gamma, int delta);
std::complex<double> T_complex(const Fraction& f, const Fraction& gamma, int delta);

// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + c_; }

 private:
  T sum_{}, c_{};
};

}  // namespace amo
