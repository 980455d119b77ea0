#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "amo/contfrac.hpp"

using namespace amo;

namespace {
ContinuedFraction cf(std::initializer_list<std::int64_t> a) { return ContinuedFraction{std::vector<std::int64_t>(a)}; }
}  // namespace

TEST_SUITE("contfrac") {
  TEST_CASE("fractions are reduced") {
    CHECK(make_fraction(4, 6) == Fraction{2, 3});
    CHECK(make_fraction(-2, -4) == Fraction{1, 2});
    CHECK(to_string(make_fraction(602, 402)) == "301/201");
    CHECK_THROWS_AS(make_fraction(1, 0), std::invalid_argument);
  }

  TEST_CASE("expand") {
    CHECK(expand(make_fraction(2, 3)) == cf({1, 2}));
    CHECK(expand(make_fraction(1, 1)) == cf({1}));
    CHECK(expand(make_fraction(201, 301)) == cf({1, 2, 100}));
    CHECK(expand(make_fraction(5, 7)) == cf({1, 2, 2}));
    CHECK(expand(make_fraction(1, 5)) == cf({5}));
    CHECK_THROWS_WITH_AS(expand(make_fraction(0, 3)), doctest::Contains("not in (0,1]"), std::invalid_argument);
    CHECK_THROWS_AS(expand(make_fraction(4, 3)), std::invalid_argument);
  }

  TEST_CASE("expand ends with a coefficient of at least two") {
    for (std::int64_t q = 2; q <= 60; ++q)
      for (std::int64_t p = 1; p < q; ++p) {
        if (gcd(p, q) != 1) continue;
        const ContinuedFraction c = expand(make_fraction(p, q));
        if (c.size() >= 2) CHECK(c.a.back() >= 2);
        CHECK(evaluate(c) == make_fraction(p, q));
      }
  }

  TEST_CASE("convergents") {
    auto c = convergents(cf({1, 2, 2}));
    REQUIRE(c.size() == 3);
    CHECK(c[0] == Fraction{1, 1});
    CHECK(c[1] == Fraction{2, 3});
    CHECK(c[2] == Fraction{5, 7});
    CHECK(convergents(cf({1})) == std::vector<Fraction>{{1, 1}});
    auto d = convergents(cf({1, 2, 100}));
    CHECK(d.back() == Fraction{201, 301});
  }

  TEST_CASE("overflow is reported, not wrapped") {
    ContinuedFraction big;
    big.a.assign(100, 1000000);
    CHECK_THROWS_AS(convergents(big), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(std::numeric_limits<std::int64_t>::max(), 2), std::overflow_error);
  }

  TEST_CASE("tails") {
    auto t = tails(cf({1, 2, 100}));
    REQUIRE(t.size() == 3);
    CHECK(t[0] == Fraction{201, 301});
    CHECK(t[1] == Fraction{100, 201});
    CHECK(t[2] == Fraction{1, 100});
    CHECK(tails(cf({1})) == std::vector<Fraction>{{1, 1}});
    auto u = tails(cf({1, 2}));
    CHECK(u[0] == Fraction{2, 3});
    CHECK(u[1] == Fraction{1, 2});
    CHECK(tail_product_identity(cf({1, 2})));
    CHECK(tail_product_identity(cf({1, 2, 100})));
    CHECK(tail_product_identity(cf({3, 4, 6, 2, 8})));
  }

  TEST_CASE("parity") {
    CHECK(parity_check(cf({1, 2, 100})));
    CHECK_FALSE(parity_check(cf({2, 2})));
    CHECK_FALSE(parity_check(cf({1, 3})));
    CHECK(parity_check(cf({1})));
  }

  TEST_CASE("growth report") {
    auto g = growth_check(cf({1, 2}), 3.0, 1.0);
    REQUIRE(g.size() == 1);
    CHECK(g[0].n == 1);
    CHECK(g[0].coefficient_ok);

    auto h = growth_check(cf({1, 2, 100}), 4.0, 1.0);
    REQUIRE(h.size() == 2);
    CHECK(h[1].q_n == 3);
    CHECK(h[1].coefficient_ok);

    auto k = growth_check(cf({1, 2, 2}), 56.0, 1.0);
    CHECK_FALSE(k.back().coefficient_ok);
    CHECK_THROWS_AS(growth_check(cf({1, 2}), 2.0, 1.0), std::invalid_argument);
  }

  TEST_CASE("length bounds") {
    for (auto c : {cf({1, 2, 100}), cf({1, 2, 2, 2, 2}), cf({3, 4, 6, 2, 8}), cf({1})}) {
      const auto q = evaluate(c).den;
      CHECK(static_cast<double>(c.size()) <= length_bound_parity(q) + 1e-12);
    }
    const ContinuedFraction fast = cf({1, 2, 100, 50000});
    const auto conv = convergents(fast);
    CHECK(static_cast<double>(fast.size()) <= length_bound_growth(conv.back().den, 2.0) + 1e-12);
  }

  TEST_CASE("coefficient parsing") {
    CHECK(parse_coefficients("1,2,100") == cf({1, 2, 100}));
    CHECK(parse_coefficients(" 1, 2 ,4 ") == cf({1, 2, 4}));
    CHECK_THROWS_AS(parse_coefficients("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coefficients("1,0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coefficients("a"), std::invalid_argument);
    CHECK(to_string(cf({1, 2, 100})) == "[1,2,100]");
  }
}
