#include <doctest.h>

#include <cmath>
#include <random>

#include "amo/contfrac.hpp"
#include "amo/contour.hpp"
#include "amo/discriminant.hpp"
#include "amo/spectrum.hpp"
#include "amo/trigsums.hpp"
#include "amo/verify.hpp"
#include "butterfly.hpp"

using namespace amo;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed5eedULL);
  return g;
}

std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng()); }
double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

Fraction random_fraction(std::int64_t qmax, bool odd) {
  for (;;) {
    std::int64_t q = uniform(1, qmax);
    if (odd && q % 2 == 0) continue;
    const std::int64_t p = uniform(1, q);
    if (gcd(p, q) == 1) return {p, q};
  }
}

ContinuedFraction random_admissible(int max_len, std::int64_t max_coeff) {
  ContinuedFraction cf;
  const int n = static_cast<int>(uniform(1, max_len));
  cf.a.push_back(2 * uniform(0, max_coeff / 2) + 1);
  for (int i = 1; i < n; ++i) cf.a.push_back(2 * uniform(1, max_coeff / 2));
  return cf;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("expansion round trip and convergent determinants") {
    for (int it = 0; it < 2000; ++it) {
      const Fraction f = random_fraction(100000, false);
      const ContinuedFraction cf = expand(f);
      REQUIRE(evaluate(cf) == f);
      const auto c = convergents(cf);
      for (std::size_t k = 1; k < c.size(); ++k) {
        const std::int64_t det = c[k].num * c[k - 1].den - c[k - 1].num * c[k].den;
        CHECK(std::llabs(det) == 1);
      }
      CHECK(tail_product_identity(cf));
    }
  }

  TEST_CASE("parity-admissible expansions have odd denominators and short length") {
    for (int it = 0; it < 500; ++it) {
      const ContinuedFraction cf = random_admissible(6, 20);
      REQUIRE(parity_check(cf));
      for (const Fraction& c : convergents(cf)) CHECK(c.den % 2 == 1);
      CHECK(static_cast<double>(cf.size()) <= length_bound_parity(evaluate(cf).den) + 1e-12);
    }
  }

  TEST_CASE("discriminant symmetry and agreement of both evaluators") {
    for (int it = 0; it < 400; ++it) {
      const Fraction f = random_fraction(400, false);
      const double E = uniform_real(-4.5, 4.5);
      Discriminant d(f.num, f.den);
      const Consistency c = d.consistency(E);
      CHECK(c.signs_agree);
      CHECK(c.discrepancy < 1e-9);
      const Consistency s = d.symmetry(E);
      CHECK(s.signs_agree);
      CHECK(s.discrepancy < 1e-10);
    }
  }

  TEST_CASE("p and q - p give the same centers") {
    for (int it = 0; it < 50; ++it) {
      const Fraction f = random_fraction(150, true);
      if (f.den < 3) continue;
      const auto a = band_centers(f.num, f.den), b = band_centers(f.den - f.num, f.den);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("band structure invariants") {
    for (int it = 0; it < 120; ++it) {
      const Fraction f = random_fraction(151, true);
      const BandStructure bs = extract_band_structure(f.num, f.den);
      CAPTURE(f.num);
      CAPTURE(f.den);
      CHECK(bs.left(-bs.s) >= -4.0 - 1e-12);
      CHECK(bs.right(bs.s) <= 4.0 + 1e-12);
      for (std::int64_t j = -bs.s; j <= bs.s; ++j) {
        CHECK(bs.w_at(j) > 0.0);
        CHECK(bs.w_prime_at(j) > 0.0);
        CHECK(bs.lambda_at(j) == doctest::Approx(-bs.lambda_at(-j)).epsilon(1e-12));
        CHECK(bs.w_at(j) == doctest::Approx(bs.w_prime_at(-j)).epsilon(1e-9));
        if (j < bs.s) CHECK(bs.delta_at(j) >= 0.0);
      }
      CHECK(last_wilkinson_residual(bs) < 1e-8 / static_cast<double>(bs.q));
      CHECK(check_last_bounds(bs).passed());
    }
  }

  TEST_CASE("double and multiprecision extraction agree on resolved gaps") {
    SpectrumOptions dbl;
    dbl.precision = Precision::Double;
    for (int it = 0; it < 40; ++it) {
      const Fraction f = random_fraction(121, true);
      const BandStructure a = extract_band_structure(f.num, f.den);
      const BandStructure b = extract_band_structure(f.num, f.den, dbl);
      for (std::size_t i = 0; i < a.delta.size(); ++i)
        if (a.delta[i] > 1e-6) CHECK(b.delta[i] == doctest::Approx(a.delta[i]).epsilon(1e-7));
    }
  }

  TEST_CASE("sum identities") {
    for (int it = 0; it < 150; ++it) {
      const Fraction f = random_fraction(501, true);
      const std::int64_t k = uniform(0, (f.den - 1) / 2);
      const SumContext ctx(f.num, f.den, k);
      const auto t = F_table(ctx);
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == doctest::Approx(t[t.size() - 1 - i]).epsilon(1e-9));
      CHECK(std::fabs(F_total(ctx) - static_cast<double>(f.den - 1)) < 1e-8);
      CHECK(std::fabs(L_direct(ctx) - L_formula(ctx)) < 1e-8);
      const Fraction g = make_fraction(-2 * k * f.num, f.den);
      CHECK(S_complex(f, g).real() == doctest::Approx(S_k(ctx)).epsilon(1e-10));
    }
  }

  TEST_CASE("digamma recurrence") {
    for (int it = 0; it < 500; ++it) {
      const double x = uniform_real(0.05, 50.0);
      CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-13));
    }
  }

  TEST_CASE("gamma normalization under even shifts") {
    for (int it = 0; it < 1000; ++it) {
      const Fraction t = random_fraction(50, false);
      const Fraction raw = make_fraction(uniform(-500, 500), uniform(1, 40));
      const auto a = normalize_gamma(t, raw);
      CHECK(a.gamma.value() >= 0.5 * t.value() - 1e-15);
      CHECK(a.gamma.value() <= 1.0 + 0.5 * t.value() + 1e-15);
      const std::int64_t m = uniform(-5, 5);
      const auto b = normalize_gamma(t, make_fraction(raw.num + 2 * m * raw.den, raw.den));
      CHECK(b.gamma == a.gamma);
      CHECK(b.k_shift == a.k_shift - 2 * m);
      CHECK(b.eps == a.eps);
      const auto c = normalize_gamma(t, make_fraction(raw.num + raw.den, raw.den));
      CHECK(c.eps == 1 - a.eps);
      const auto d = normalize_gamma(t, raw.value());
      CHECK(d.k_shift == a.k_shift);
    }
  }

  TEST_CASE("recursion on random admissible expansions") {
    int done = 0;
    while (done < 8) {
      ContinuedFraction cf = random_admissible(3, 8);
      const Fraction f = evaluate(cf);
      if (f.den < 3 || f.den > 301) continue;
      const std::int64_t k = uniform(0, (f.den - 1) / 2);
      const RecursionResult r = recursion_check(cf, k);
      CHECK(r.residual < 1e-6);
      CHECK(r.bounds_ok);
      ++done;
    }
  }

  TEST_CASE("inequality suites on random admissible frequencies") {
    int done = 0;
    while (done < 25) {
      const Fraction f = random_fraction(201, true);
      if (!parity_check(expand(f))) continue;
      const SuiteResult r = run_suite(Suite::All, f.num, f.den);
      CAPTURE(f.num);
      CAPTURE(f.den);
      CHECK(r.report.passed());
      ++done;
    }
  }

  TEST_CASE("csv parsing inverts formatting") {
    std::vector<tools::BandRow> rows;
    for (int it = 0; it < 300; ++it) {
      tools::BandRow r;
      r.p = uniform(0, 50);
      r.q = uniform(1, 50);
      r.j = uniform(-25, 25);
      r.sampled = uniform(0, 1) == 1;
      r.lambda = uniform_real(-4, 4) * std::pow(10.0, static_cast<double>(uniform(-20, 0)));
      r.w = uniform_real(0, 1);
      r.w_prime = uniform_real(0, 1);
      if (r.sampled) {
        r.eta = r.mu = r.ell = std::nan("");
      } else {
        r.eta = uniform_real(-4, 4);
        r.mu = uniform_real(-4, 4);
        r.ell = uniform_real(0, 1);
      }
      rows.push_back(r);
    }
    const std::string csv = tools::bands_csv(rows, true);
    CHECK(tools::bands_csv(tools::parse_bands_csv(csv), true) == csv);
  }
}
