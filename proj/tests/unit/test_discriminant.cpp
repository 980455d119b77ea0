#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "amo/discriminant.hpp"

using namespace amo;

namespace {
// mpmath values of the derivative of the characteristic polynomial at 0 (60 digits)
struct SigmaPrimeOracle {
  std::int64_t p, q;
  double value;
};
constexpr SigmaPrimeOracle kSigmaPrime0[] = {
    {1, 3, 6.0},
    {1, 5, -11.909830056250526},
    {2, 7, 23.003457849509068},
    {5, 13, -89.499434109367174},
    {201, 301, -2597.1532613371739},
    {2, 67, 420.47336251923952},
    {97, 199, 885663964437.16596},
};
}  // namespace

TEST_SUITE("discriminant") {
  TEST_CASE("closed forms") {
    CHECK(sigma(1, 1, 2.5).to_double() == doctest::Approx(-2.5));
    CHECK(sigma(1, 3, 0.0).is_zero());
    CHECK(sigma(1, 3, 1.0).to_double() == doctest::Approx(5.0).epsilon(1e-14));
    for (double E : {-3.1, -0.4, 0.9, 2.2, 3.7})
      CHECK(sigma(2, 3, E).to_double() == doctest::Approx(-E * E * E + 6.0 * E).epsilon(1e-13));
  }

  TEST_CASE("off-diagonals") {
    auto b = jacobi_offdiagonal(1, 3);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == doctest::Approx(std::sqrt(3.0)));
    CHECK(b[1] == doctest::Approx(std::sqrt(3.0)));
    auto c = jacobi_offdiagonal(2, 3);
    CHECK(c[0] == doctest::Approx(std::sqrt(3.0)));
    CHECK(c[1] == doctest::Approx(-std::sqrt(3.0)));
    CHECK(jacobi_offdiagonal(1, 1).empty());
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(sigma(2, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma(1, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma_prime0(3, 9), std::invalid_argument);
  }

  TEST_CASE("transfer product against determinant") {
    auto c = sigma_consistency(1, 3, 1.0);
    CHECK(c.discrepancy < 1e-12);
    CHECK(c.signs_agree);
    auto d = sigma_consistency(1, 1, 0.3);
    CHECK(d.discrepancy == 0.0);
    auto e = sigma_consistency(3, 5, 2.2);
    CHECK(e.discrepancy < 1e-10);
    CHECK(e.signs_agree);
    CHECK(jacobi_determinant(1, 3, 1.0).to_double() == doctest::Approx(5.0));
    CHECK(jacobi_determinant(1, 4, 1.0).to_double() == doctest::Approx(-sigma(1, 4, 1.0).to_double()));
  }

  TEST_CASE("multiprecision evaluators agree with double ones") {
    Discriminant d(13, 31);
    for (double E : {-2.9, -0.01, 1.3, 3.99}) {
      const ScaledReal a = d.sigma(E), b = d.sigma_mp(E, 40), c = d.determinant_mp(E, 40);
      CHECK(a.sign == b.sign);
      CHECK(a.log_mag == doctest::Approx(b.log_mag).epsilon(1e-10));
      CHECK(c.sign == b.sign);
      CHECK(c.log_mag == doctest::Approx(b.log_mag).epsilon(1e-12));
    }
  }

  TEST_CASE("large q stays finite in log space") {
    Discriminant d(1, 2001);
    const ScaledReal v = d.sigma(4.5);
    CHECK(v.sign != 0);
    CHECK(std::isfinite(v.log_mag));
    CHECK(v.log_mag > 700.0);
    auto c = d.consistency(4.5);
    CHECK(c.discrepancy < 1e-9);
  }

  TEST_CASE("symmetry") {
    CHECK(sigma_symmetry(2, 7, 1.234).discrepancy < 1e-12);
    CHECK(sigma_symmetry(3, 8, 0.77).discrepancy < 1e-12);
    CHECK(sigma(3, 8, 0.77).to_double() == doctest::Approx(sigma(3, 8, -0.77).to_double()));
    CHECK(sigma(2, 7, 0.77).to_double() == doctest::Approx(-sigma(2, 7, -0.77).to_double()));
  }

  TEST_CASE("sigma'(0) against frozen oracle") {
    for (const auto& o : kSigmaPrime0) {
      CAPTURE(o.p);
      CAPTURE(o.q);
      const ScaledReal v = sigma_prime0(o.p, o.q);
      CHECK(v.sign == (o.value > 0 ? 1 : -1));
      CHECK(v.log_mag == doctest::Approx(std::log(std::fabs(o.value))).epsilon(1e-12));
    }
    CHECK(sigma_prime0(1, 4).sign == 0);
  }

  TEST_CASE("sigma'(0) for q = 5 from the characteristic polynomial") {
    auto b = jacobi_offdiagonal(1, 5);
    const double b1 = b[0] * b[0], b2 = b[1] * b[1], b3 = b[2] * b[2], b4 = b[3] * b[3];
    const double coeff = b1 * b3 + b1 * b4 + b2 * b4;
    CHECK(coeff == doctest::Approx(11.9098301).epsilon(1e-8));
    CHECK(std::exp(sigma_prime0(1, 5).log_mag) == doctest::Approx(coeff).epsilon(1e-12));
  }

  TEST_CASE("sigma'(0) terms") {
    auto t = sigma_prime0_log_terms(1, 5);
    REQUIRE(t.size() == 3);
    CHECK(t[0] == doctest::Approx(std::log(5.0)).epsilon(1e-13));
    const double total = std::exp(log_sum_exp(t));
    CHECK(total == doctest::Approx(11.909830056250526).epsilon(1e-13));
    CHECK(total > 5.0);
  }

  TEST_CASE("derivative") {
    CHECK(sigma_prime(1, 3, 0.0).to_double() == doctest::Approx(6.0));
    CHECK(sigma_prime(1, 3, std::sqrt(6.0)).to_double() == doctest::Approx(-12.0));
    for (double E : {-3.3, 0.0, 1.7}) CHECK(sigma_prime(1, 1, E).to_double() == doctest::Approx(-1.0));
    for (double E : {-2.1, 0.35, 1.9}) {
      const double fd = sigma_prime_finite_difference(3, 11, E);
      CHECK(sigma_prime(3, 11, E).to_double() == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  TEST_CASE("exact trigonometry") {
    CHECK(cos_pi_fraction(1, 3) == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(cos_pi_fraction(1, 2) == 0.0);
    CHECK(sin_pi_fraction(1000000001, 1) == 0.0);
    CHECK(sin_pi_fraction(7, 6) == doctest::Approx(-0.5).epsilon(1e-15));
  }
}
