#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace amo {

// p/q in lowest terms with q >= 1.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

Fraction make_fraction(std::int64_t num, std::int64_t den);
std::string to_string(const Fraction& f);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t gcd(std::int64_t a, std::int64_t b);

struct ContinuedFraction {
  std::vector<std::int64_t> a;  // a_1..a_n, every entry >= 1

  std::size_t size() const { return a.size(); }
  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

// Parses "1,2,100" (whitespace tolerated). Throws std::invalid_argument.
ContinuedFraction parse_coefficients(std::string_view text);
std::string to_string(const ContinuedFraction& cf);

// Canonical expansion of a fraction in (0,1]: last coefficient >= 2 when n >= 2.
ContinuedFraction expand(const Fraction& f);
Fraction evaluate(const ContinuedFraction& cf);

// p_k/q_k for k = 1..n.
std::vector<Fraction> convergents(const ContinuedFraction& cf);

// t_j = [a_j, ..., a_n] for j = 1..n, so t_1 is the value of cf.
std::vector<Fraction> tails(const ContinuedFraction& cf);

// q_n * prod t_j == 1, evaluated with exact reduced products.
bool tail_product_identity(const ContinuedFraction& cf);

// a_1 odd and a_k even for k >= 2.
bool parity_check(const ContinuedFraction& cf);

struct GrowthRow {
  int n = 0;  // 1-based index of the convergent p_n/q_n
  std::int64_t q_n = 0;
  std::int64_t a_next = 0;
  std::int64_t q_next = 0;
  bool coefficient_ok = false;   // a_{n+1} > c3 q_n^(kappa-2)
  bool denominator_ok = false;   // q_{n+1} > (c3/2) q_n^(kappa-1)
  double log_margin_coefficient = 0.0;
  double log_margin_denominator = 0.0;
};

std::vector<GrowthRow> growth_check(const ContinuedFraction& cf, double kappa, double c3);

// Upper bounds on the length n in terms of the final denominator.
double length_bound_parity(std::int64_t q_n);
double length_bound_growth(std::int64_t q_n, double nu);

}  // namespace amo
