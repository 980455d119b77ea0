#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "amo/constants.hpp"
#include "amo/contour.hpp"
#include "amo/trigsums.hpp"

using namespace amo;
using cplx = std::complex<double>;

namespace {

// mpmath.quad over both contour lines at 30 digits
struct IntegralOracle {
  std::int64_t p, q;
  double gamma;
  int delta;  // -1 selects I
  cplx value;
};
const IntegralOracle kIntegrals[] = {
    {2, 3, 1.0, -1, {-1.1666666666666667, 0.46730792954889469}},
    {2, 5, 0.7, -1, {-0.74744422954401382, 0.0}},
    {1, 3, 0.5, -1, {-0.5, -0.59807621135331594}},
    {3, 7, 1.1, -1, {-0.10021325929365605, 1.1629846140474217}},
    {1, 2, 0.5, 1, {-0.66666666666666667, 1.3333333333333333}},
    {1, 3, 0.5, 0, {2.7712812921102037, 1.7333333333333333}},
    {2, 5, 0.6, 1, {-0.27551239523822876, 1.4811842745346246}},
    {3, 5, 1.2, 0, {1.4421790619048954, -1.9484922040835193}},
};

// p/q = 1/(a + p'/q') and gamma' = (q/p) gamma reduced into [0, 1)
struct Split {
  std::int64_t a;
  Fraction rest;
  double gamma_prime;
  int eps;
};
Split split(const Fraction& f, double gamma) {
  Split s;
  s.a = f.den / f.num;
  s.rest = make_fraction(f.den % f.num, f.num);
  const double x = gamma * static_cast<double>(f.den) / static_cast<double>(f.num);
  const double m = std::floor(x + 1e-12);
  s.gamma_prime = x - m;
  s.eps = static_cast<int>(static_cast<std::int64_t>(m) % 2);
  return s;
}

double sgn(int eps) { return eps ? -1.0 : 1.0; }

struct Case {
  std::int64_t p, q;
  double gamma;
};

}  // namespace

TEST_SUITE("contour") {
  TEST_CASE("integrals against frozen oracle") {
    for (const auto& o : kIntegrals) {
      CAPTURE(o.p);
      CAPTURE(o.q);
      CAPTURE(o.delta);
      const Fraction f = make_fraction(o.p, o.q);
      const cplx v = o.delta < 0 ? I_integral(f, o.gamma) : J_integral(f, o.gamma, o.delta);
      CHECK(std::abs(v - o.value) < 1e-9);
    }
  }

  TEST_CASE("I identity with S and T") {
    for (auto [p, q, gamma] : std::vector<Case>{{2, 3, 1.0}, {2, 5, 0.7}, {3, 7, 1.1}, {5, 9, 0.9}, {4, 11, 0.25}}) {
      const Fraction f = make_fraction(p, q);
      const Split s = split(f, gamma);
      const cplx rhs = S_complex(f, gamma) - sgn(s.eps) * T_complex(s.rest, s.gamma_prime, static_cast<int>(s.a % 2));
      CHECK(std::abs(I_integral(f, gamma) - rhs) < 1e-9);
      CHECK(std::abs(I_integral(f, gamma)) < I_bound(f));
    }
  }

  TEST_CASE("J identity with delta = 1") {
    for (auto [p, q, gamma] : std::vector<Case>{{2, 5, 0.6}, {4, 7, 1.1}, {3, 8, 0.5}, {2, 9, 0.3}}) {
      const Fraction f = make_fraction(p, q);
      const Split s = split(f, gamma);
      const cplx rhs = T_complex(f, gamma, 1) + sgn(s.eps) * T_complex(s.rest, s.gamma_prime, static_cast<int>((s.a + 1) % 2));
      CHECK(std::abs(J_integral(f, gamma, 1) - rhs) < 1e-9);
      CHECK(std::abs(J_integral(f, gamma, 1)) < J_bound(f, 1));
    }
  }

  TEST_CASE("J identity with delta = 0") {
    for (auto [p, q, gamma] : std::vector<Case>{{3, 5, 1.2}, {3, 7, 0.9}, {5, 8, 0.8}, {1, 3, 0.5}}) {
      const Fraction f = make_fraction(p, q);
      const Split s = split(f, gamma);
      cplx rest = 0.0;
      if (s.rest.num > 0) rest = S_complex(s.rest, s.gamma_prime);
      const cplx rhs = T_complex(f, gamma, 0) - rest;
      CHECK(std::abs(J_integral(f, gamma, 0) - rhs) < 1e-9);
      CHECK(std::abs(J_integral(f, gamma, 0)) < J_bound(f, 0));
    }
  }

  TEST_CASE("admissible window") {
    const Fraction f = make_fraction(2, 5);
    CHECK_NOTHROW(I_integral(f, 0.2));
    CHECK_NOTHROW(I_integral(f, 1.2));
    CHECK_THROWS_WITH_AS(I_integral(f, 0.1), doctest::Contains("divergent tail"), std::domain_error);
    CHECK_THROWS_WITH_AS(J_integral(make_fraction(2, 5), 1.5, 1), doctest::Contains("divergent tail"), std::domain_error);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(I_integral(make_fraction(1, 2), 0.5), std::invalid_argument);
    CHECK_THROWS_WITH_AS(J_integral(make_fraction(2, 5), 0.5, 0), doctest::Contains("J undefined"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(J_integral(make_fraction(1, 3), 0.5, 1), doctest::Contains("J undefined"), std::invalid_argument);
    QuadratureConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(I_integral(make_fraction(2, 3), 1.0, bad), std::invalid_argument);
    bad = {};
    bad.panel_order = 4;
    CHECK_THROWS_AS(I_integral(make_fraction(2, 3), 1.0, bad), std::invalid_argument);
  }

  TEST_CASE("refinement budget") {
    QuadratureConfig tight;
    tight.tol = 1e-15;
    tight.panel_order = 8;
    tight.max_depth = 0;
    CHECK_THROWS_WITH_AS(I_integral(make_fraction(2, 3), 1.0, tight), doctest::Contains("quadrature unconverged"), std::runtime_error);
  }

  TEST_CASE("independent quadrature settings agree") {
    QuadratureConfig a, b;
    b.panel_order = 24;
    b.truncation_margin = 40.0;
    b.tol = 1e-12;
    CHECK(std::abs(I_integral(make_fraction(2, 5), 0.7, a) - I_integral(make_fraction(2, 5), 0.7, b)) < 1e-8);
    QuadratureConfig loose;
    loose.tol = 1e-6;
    QuadratureConfig fine;
    fine.tol = 1e-9;
    CHECK(std::abs(J_integral(make_fraction(1, 2), 0.5, 1, loose) - J_integral(make_fraction(1, 2), 0.5, 1, fine)) < 1e-6);
  }

  TEST_CASE("bounds") {
    CHECK(I_bound(make_fraction(2, 3)) == doctest::Approx(4.0 * std::log(1.5) + 5.0 / (2.0 * M_E * M_PI) + constants::beta));
    CHECK(I_bound(make_fraction(2, 3)) == doctest::Approx(7.63).epsilon(1e-3));
    CHECK(J_bound(make_fraction(1, 2), 1) == doctest::Approx(I_bound(make_fraction(1, 2))));
    CHECK(J_bound(make_fraction(1, 3), 0) == doctest::Approx(I_bound(make_fraction(1, 3)) / std::sin(M_PI / 3.0)));
  }

  TEST_CASE("gamma normalization") {
    auto a = normalize_gamma(make_fraction(2, 3), make_fraction(0, 1));
    CHECK(a.gamma == Fraction{1, 1});
    CHECK(a.k_shift == 1);
    CHECK(a.eps == 1);
    auto b = normalize_gamma(make_fraction(1, 2), make_fraction(1, 2));
    CHECK(b.gamma == Fraction{1, 2});
    CHECK(b.k_shift == 0);
    CHECK(b.eps == 0);
    auto c = normalize_gamma(make_fraction(1, 2), make_fraction(-3, 2));
    CHECK(c.gamma == Fraction{1, 2});
    CHECK(c.k_shift == 2);
    CHECK(c.eps == 0);
    // window end 1 + t/2: the lower shift wins
    auto d = normalize_gamma(make_fraction(1, 2), make_fraction(5, 4));
    CHECK(d.gamma == Fraction{1, 4});
    CHECK(d.k_shift == -1);
    auto e = normalize_gamma(make_fraction(2, 3), 0.0);
    CHECK(e.gamma == doctest::Approx(1.0));
    CHECK(e.eps == 1);
  }

  TEST_CASE("recursion examples") {
    const auto r = recursion_check(ContinuedFraction{{1, 2}}, 0);
    CHECK(r.lhs.real() == doctest::Approx(1.5));
    CHECK(r.lhs.imag() == doctest::Approx(-std::sqrt(3.0) / 2.0));
    CHECK(r.residual < 1e-6);
    CHECK(r.bounds_ok);
    CHECK(recursion_check(ContinuedFraction{{1, 2, 2}}, 1).residual < 1e-6);
    CHECK(recursion_check(ContinuedFraction{{1, 4}}, 0).residual < 1e-6);
    const auto deep = recursion_check(ContinuedFraction{{1, 2, 100}}, 7);
    REQUIRE(deep.levels.size() == 3);
    for (const auto& lv : deep.levels) {
      CHECK(lv.gamma.value() >= 0.5 * lv.t.value() - 1e-15);
      CHECK(lv.gamma.value() <= 1.0 + 0.5 * lv.t.value() + 1e-15);
      CHECK(std::abs(lv.integral) < lv.bound);
    }
    CHECK(deep.residual < 1e-6);
    CHECK_THROWS_WITH_AS(recursion_check(ContinuedFraction{{1, 3}}, 0), doctest::Contains("parity"), std::invalid_argument);
    CHECK_THROWS_AS(recursion_check(ContinuedFraction{{1}}, 0), std::invalid_argument);
  }

  TEST_CASE("sum bound report") {
    auto a = sum_bound_check(ContinuedFraction{{1, 2}}, 0);
    CHECK(a.abs_S_k == doctest::Approx(1.5));
    CHECK(a.bound == doctest::Approx(22.45).epsilon(1e-3));
    CHECK(sum_bound_check(ContinuedFraction{{1, 2, 2}}, 1).slack > 0.0);
    CHECK(sum_bound_check(ContinuedFraction{{1, 2, 100}}, 5).slack > 0.0);
  }
}
