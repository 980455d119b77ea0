#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "amo/constants.hpp"
#include "amo/discriminant.hpp"
#include "amo/trigsums.hpp"

using namespace amo;

namespace {
// direct sums in mpmath at 60 digits
struct SkOracle {
  std::int64_t p, q, k;
  double value;
};
constexpr SkOracle kSk[] = {
    {1, 7, 2, 1.3046829569616863},    {201, 301, 5, -1.6994971312000827}, {5, 7, 1, 2.0141844333404801},
    {2, 3, 0, 1.5},                   {13, 31, 7, 6.1819853323291613},
};
}  // namespace

TEST_SUITE("trigsums") {
  TEST_CASE("context validation") {
    CHECK_THROWS_AS(SumContext(1, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(SumContext(1, 5, 3), std::invalid_argument);
    CHECK_THROWS_AS(SumContext(1, 5, -1), std::invalid_argument);
    CHECK_THROWS_AS(SumContext(3, 9, 0), std::invalid_argument);
    CHECK_THROWS_AS(F(0, SumContext(1, 5, 1)), std::invalid_argument);
    CHECK_THROWS_AS(F(5, SumContext(1, 5, 1)), std::invalid_argument);
  }

  TEST_CASE("F closed form") {
    const SumContext c(1, 5, 1);
    CHECK(F(1, c) == doctest::Approx(-1.2360680).epsilon(1e-7));
    CHECK(F(2, c) == doctest::Approx(3.2360680).epsilon(1e-7));
    CHECK(F(1, c) == doctest::Approx(-2.0 * (std::cos(8 * std::numbers::pi / 5) + std::cos(12 * std::numbers::pi / 5))));
    for (std::int64_t ell = 1; ell < 9; ++ell) CHECK(F(ell, SumContext(2, 9, 0)) == doctest::Approx(1.0));
    for (std::int64_t ell = 1; ell < 13; ++ell) CHECK(F(ell, SumContext(5, 13, 4)) == doctest::Approx(F_brute(ell, SumContext(5, 13, 4))).epsilon(1e-12));
  }

  TEST_CASE("F totals") {
    CHECK(F_total(SumContext(1, 5, 1)) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(F_total(SumContext(1, 3, 0)) == doctest::Approx(2.0));
    CHECK(F_total(SumContext(1, 7, 3)) == doctest::Approx(6.0).epsilon(1e-13));
    auto t = F_table(SumContext(1, 5, 1));
    REQUIRE(t.size() == 4);
    CHECK(t[0] == doctest::Approx(t[3]));
    CHECK(t[1] == doctest::Approx(t[2]));
  }

  TEST_CASE("digamma against boost") {
    CHECK(digamma(1.0) == doctest::Approx(-constants::gamma0).epsilon(1e-15));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - constants::gamma0).epsilon(1e-15));
    CHECK(digamma(1.5) == doctest::Approx(0.036489973978576521).epsilon(1e-13));
    for (int i = 0; i <= 200; ++i) {
      const double x = 1.0 + i / 200.0;
      const double ref = boost::math::digamma(x);
      CHECK(std::fabs(digamma(x) - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
    }
    for (double x : {1e-3, 0.37, 7.5, 123.4, 1e6}) CHECK(digamma(x) == doctest::Approx(boost::math::digamma(x)).epsilon(1e-13));
    for (double x : {0.3, 1.7, 9.9}) CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-14));
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-2.5), std::domain_error);
  }

  TEST_CASE("L by both routes") {
    CHECK(L_direct(SumContext(1, 5, 0)) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
    CHECK(L_direct(SumContext(1, 3, 0)) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(L_direct(SumContext(1, 3, 1)) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(std::fabs(L_formula(SumContext(1, 5, 0)) - std::log(5.0)) < 1e-8);
    CHECK(std::fabs(L_formula(SumContext(1, 3, 0)) - std::log(3.0)) < 1e-8);
    CHECK(std::fabs(L_formula(SumContext(1, 3, 1)) - std::log(3.0)) < 1e-8);
    for (std::int64_t k = 0; k <= 150; k += 25) {
      const SumContext c(201, 301, k);
      CHECK(std::fabs(L_direct(c) - L_formula(c)) < 1e-8);
    }
  }

  TEST_CASE("S_k") {
    CHECK(S_k(SumContext(1, 5, 0)) == doctest::Approx(25.0 / 12.0).epsilon(1e-14));
    for (const auto& o : kSk) {
      CAPTURE(o.q);
      CAPTURE(o.k);
      CHECK(S_k(SumContext(o.p, o.q, o.k)) == doctest::Approx(o.value).epsilon(1e-12));
    }
    CHECK(std::fabs(S_k(SumContext(1, 7, 2))) < sum_bound(7));
    CHECK(sum_bound(3) == doctest::Approx(22.45).epsilon(1e-3));
  }

  TEST_CASE("digamma sum bound") {
    for (std::int64_t k = 0; k <= 3; ++k) {
      const SumContext c(5, 7, k);
      CHECK(std::fabs(digamma_sum(c)) < digamma_sum_bound(7));
    }
  }

  TEST_CASE("complex S") {
    const Fraction f = make_fraction(2, 3);
    const auto a = S_complex(f, 1.0);
    CHECK(a.real() == doctest::Approx(1.5));
    CHECK(a.imag() == doctest::Approx(-std::sqrt(3.0) / 2.0));
    const auto b = S_complex(f, 0.0);
    CHECK(std::abs(a - b) < 1e-14);
    CHECK(std::abs(S_complex(f, make_fraction(1, 1)) - a) < 1e-14);
    CHECK(S_complex(make_fraction(1, 5), 0.0).real() == doctest::Approx(25.0 / 12.0));
    // S_k = Re S(p/q, -2kp/q)
    for (std::int64_t k = 0; k <= 3; ++k) {
      const Fraction g = make_fraction(-2 * k * 5, 7);
      CHECK(S_complex(make_fraction(5, 7), g).real() == doctest::Approx(S_k(SumContext(5, 7, k))).epsilon(1e-13));
      CHECK(S_complex(make_fraction(5, 7), g.value()).real() == doctest::Approx(S_k(SumContext(5, 7, k))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(S_complex(make_fraction(1, 2), 0.0), std::invalid_argument);
  }

  TEST_CASE("complex T") {
    // p = 1, q = 2, gamma = 1/2, delta = 1: terms n = 1, 2 summed by hand
    using cplx = std::complex<double>;
    cplx ref = 0.0;
    for (int n = 1; n <= 2; ++n) {
      const cplx sw = -std::exp(cplx(0.0, std::numbers::pi * (2 * n - 1) / 2.0));
      ref += sw / (1.0 - sw) * std::exp(cplx(0.0, -2.0 * std::numbers::pi * 0.5 * (n - 0.5))) / (n - 0.5);
    }
    ref *= 2.0;
    const auto t = T_complex(make_fraction(1, 2), 0.5, 1);
    CHECK(std::abs(t - ref) < 1e-14);
    CHECK(std::abs(T_complex(make_fraction(1, 2), make_fraction(1, 2), 1) - ref) < 1e-14);
    CHECK_THROWS_WITH_AS(T_complex(make_fraction(2, 3), 0.5, 0), doctest::Contains("T undefined"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(T_complex(make_fraction(1, 1), 0.5, 1), doctest::Contains("T undefined"), std::invalid_argument);
    CHECK_NOTHROW(T_complex(make_fraction(1, 3), 0.5, 0));
  }

  TEST_CASE("compensated sum") {
    CompensatedSum<double> s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-16);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-10));
  }
}
