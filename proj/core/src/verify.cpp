#include "amo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "amo/constants.hpp"
#include "amo/discriminant.hpp"
#include "amo/trigsums.hpp"

namespace amo {

namespace {

constexpr double kRelTol = 1e-9;
const double kLn4 = std::log(4.0);

CheckRecord make(std::string name, double lhs, double rhs, double slack, double scale) {
  CheckRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  const double tol = kRelTol * scale;
  r.pass = slack > -tol;
  r.marginal = std::fabs(slack) <= tol;
  r.equality = slack == 0.0;
  return r;
}

double scale_of(double a, double b) { return std::max({1.0, std::fabs(a), std::fabs(b)}); }

CheckRecord greater(std::string name, double a, double b, bool log_scale) {
  CheckRecord r = check_greater(std::move(name), a, b);
  r.log_scale = log_scale;
  return r;
}

CheckRecord check_less(std::string name, double a, double b, bool log_scale = false) {
  CheckRecord r = make(std::move(name), a, b, b - a, scale_of(a, b));
  r.log_scale = log_scale;
  return r;
}

CheckRecord& tag(CheckRecord& r, const BandStructure& bs, std::optional<std::int64_t> j = {}) {
  r.p = bs.p;
  r.q = bs.q;
  r.j = j;
  return r;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

void require_parity(std::int64_t p, std::int64_t q) {
  if (!parity_check(expand(make_fraction(p, q))))
    throw std::invalid_argument("parity condition violated for " + std::to_string(p) + "/" + std::to_string(q));
}

BandStructure structure(std::int64_t p, std::int64_t q) { return extract_band_structure(p, q); }

}  // namespace

bool VerificationReport::passed() const { return failures() == 0; }

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.asserting && !c.pass; }));
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

void VerificationReport::sort() {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
    return std::tie(a.name, a.p, a.q, a.j, a.k) < std::tie(b.name, b.p, b.q, b.j, b.k);
  });
}

CheckRecord check_greater(std::string name, double a, double b) {
  return make(std::move(name), a, b, a - b, scale_of(a, b));
}

CheckRecord check_close(std::string name, double a, double b, double tol) {
  CheckRecord r;
  r.name = std::move(name);
  r.lhs = a;
  r.rhs = b;
  const double allowed = tol * scale_of(a, b);
  r.slack = allowed - std::fabs(a - b);
  r.pass = r.slack >= 0.0;
  r.equality = a == b;
  return r;
}

VerificationReport check_lemma1(const BandStructure& bs) {
  if (bs.q < 3 || bs.q % 2 == 0) throw std::invalid_argument("lemma1 checks need odd q >= 3");
  VerificationReport rep;
  const double w0 = bs.w_at(0);
  {
    CheckRecord r = check_greater("lemma1.delta0", bs.delta_at(0), (w0 / 4.0) * (w0 / 4.0));
    rep.checks.push_back(tag(r, bs, 0));
  }
  const double log_C0 = std::log(constants::C0);
  for (std::int64_t j = 1; j < bs.s; ++j) {
    const double log_delta = safe_log(bs.delta_at(j));
    CheckRecord a =
        greater("lemma1.width_ratio", log_delta,
                2.0 * std::log(bs.w_at(j)) - std::log(4.0) - 2.0 * static_cast<double>(j + 1) * log_C0, true);
    rep.checks.push_back(tag(a, bs, j));
    CheckRecord b = greater("lemma1.central_power", log_delta, 2.0 * static_cast<double>(j) * std::log(w0 / 8.0), true);
    rep.checks.push_back(tag(b, bs, j));
  }
  for (std::int64_t j = 0; j < bs.s; ++j) {
    const double m = std::min(bs.w_at(j), bs.w_prime_at(j + 1));
    CheckRecord r = greater("lemma1.remark", safe_log(bs.delta_at(j)),
                            2.0 * std::log(m) - std::log(4.0 * static_cast<double>(bs.q)), true);
    rep.checks.push_back(tag(r, bs, j));
  }
  return rep;
}

VerificationReport check_lemma1(std::int64_t p, std::int64_t q) { return check_lemma1(structure(p, q)); }

VerificationReport check_cey_products(const BandStructure& bs) {
  if (bs.q < 3 || bs.q % 2 == 0) throw std::invalid_argument("product checks need odd q >= 3");
  VerificationReport rep;
  const EdgeLine line(bs);
  auto log_prod = [&](std::size_t from, auto id_of, std::int64_t skip) {
    CompensatedSum<double> acc;
    for (std::int64_t k = -bs.s; k <= bs.s; ++k) {
      if (k == skip) continue;
      acc.add(std::log(line.distance(from, id_of(k))));
    }
    return acc.value();
  };
  auto mu = [&](std::int64_t k) { return line.mu_id(k); };
  auto eta = [&](std::int64_t k) { return line.eta_id(k); };
  const std::int64_t none = bs.s + 1;
  for (std::int64_t j = -bs.s; j <= bs.s; ++j) {
    CheckRecord a = greater("cey.mu", log_prod(line.mu_id(j), mu, j), 0.0, true);
    rep.checks.push_back(tag(a, bs, j));
    CheckRecord b = greater("cey.eta", log_prod(line.eta_id(j), eta, j), 0.0, true);
    rep.checks.push_back(tag(b, bs, j));
    CheckRecord c = check_close("prodid.mu", std::exp(log_prod(line.center_id(j), mu, none)), 4.0, 1e-8);
    rep.checks.push_back(tag(c, bs, j));
    CheckRecord d = check_close("prodid.eta", std::exp(log_prod(line.center_id(j), eta, none)), 4.0, 1e-8);
    rep.checks.push_back(tag(d, bs, j));
  }
  return rep;
}

VerificationReport check_cey_products(std::int64_t p, std::int64_t q) { return check_cey_products(structure(p, q)); }

VerificationReport check_last_bounds(const BandStructure& bs) {
  VerificationReport rep;
  const double q = static_cast<double>(bs.q);
  const double log_golden = std::log((std::sqrt(5.0) - 1.0) / 2.0);
  double widest = 0.0;
  for (std::int64_t j = -bs.s; j <= bs.s; ++j) {
    const double log_ell = kLn4 - bs.log_abs_sigma_prime[bs.idx(j)];
    const double lw = std::log(bs.w_at(j)), lwp = std::log(bs.w_prime_at(j));
    CheckRecord a = greater("last.lower_w", lw, log_golden + log_ell, true);
    rep.checks.push_back(tag(a, bs, j));
    CheckRecord b = greater("last.lower_w_prime", lwp, log_golden + log_ell, true);
    rep.checks.push_back(tag(b, bs, j));
    CheckRecord c = check_less("last.upper_w", lw, 1.0 + log_ell, true);
    rep.checks.push_back(tag(c, bs, j));
    CheckRecord d = check_less("last.upper_w_prime", lwp, 1.0 + log_ell, true);
    rep.checks.push_back(tag(d, bs, j));
    widest = std::max({widest, bs.w_at(j), bs.w_prime_at(j)});
  }
  {
    CheckRecord r;
    r.name = "last.wilkinson_sum";
    r.lhs = last_wilkinson_sum(bs);
    r.rhs = 1.0 / q;
    r.slack = 1e-8 / q - std::fabs(r.lhs - r.rhs);
    r.pass = r.slack > 0.0;
    r.equality = r.lhs == r.rhs;
    rep.checks.push_back(tag(r, bs));
  }
  {
    CheckRecord r = check_less("last.measure", measure(bs), 8.0 * std::numbers::e / q);
    rep.checks.push_back(tag(r, bs));
  }
  {
    CheckRecord r = check_less("last.max_half_width", widest, 4.0 * std::numbers::e / q);
    rep.checks.push_back(tag(r, bs));
  }
  return rep;
}

VerificationReport check_lemma2(const BandStructure& bs) {
  require_parity(bs.p, bs.q);
  VerificationReport rep;
  const double log_sp = sigma_prime0(bs.p, bs.q).log_mag;
  const double log_q = std::log(static_cast<double>(bs.q));
  const double log_C2 = 10.0;
  const double upper = log_C2 + constants::C1 * log_q;
  const double sharp = constants::sharp_exponent * log_q + constants::log_sharp_prefactor;
  {
    CheckRecord r = greater("lemma2.lower", log_sp, log_q, true);
    if (bs.q == 1) r.note = "equality case q = 1";
    rep.checks.push_back(tag(r, bs));
  }
  {
    CheckRecord r = check_less("lemma2.upper", log_sp, upper, true);
    rep.checks.push_back(tag(r, bs));
  }
  {
    CheckRecord r = check_less("lemma2.sharp", log_sp, sharp, true);
    rep.checks.push_back(tag(r, bs));
  }
  {
    CheckRecord r = check_less("lemma2.sharp_below_upper", sharp, upper, true);
    rep.checks.push_back(tag(r, bs));
  }
  {
    CheckRecord r = greater("lemma2.w0", std::log(bs.w_at(0)), kLn4 - log_sp, true);
    if (bs.q == 1) r.note = "equality case q = 1";
    rep.checks.push_back(tag(r, bs, 0));
  }
  return rep;
}

VerificationReport check_lemma2(std::int64_t p, std::int64_t q) {
  require_parity(p, q);
  return check_lemma2(structure(p, q));
}

VerificationReport check_theorem3(const BandStructure& bs) {
  require_parity(bs.p, bs.q);
  if (bs.q < 3) throw std::invalid_argument("thm3 checks need q >= 3");
  VerificationReport rep;
  const double log_q = std::log(static_cast<double>(bs.q));
  const double log_b = 10.0 + constants::C1 * log_q;
  {
    CheckRecord r = greater("thm3.delta0", safe_log(bs.delta_at(0)), -2.0 * log_b, true);
    rep.checks.push_back(tag(r, bs, 0));
  }
  for (std::int64_t j = 1; j < bs.s; ++j) {
    CheckRecord r = greater("thm3.delta_j", safe_log(bs.delta_at(j)),
                            -2.0 * static_cast<double>(j) * (std::log(2.0) + log_b), true);
    rep.checks.push_back(tag(r, bs, j));
  }
  return rep;
}

VerificationReport check_theorem3(std::int64_t p, std::int64_t q) {
  require_parity(p, q);
  return check_theorem3(structure(p, q));
}

VerificationReport check_ams_continuity(const Fraction& f1, const Fraction& f2) {
  VerificationReport rep;
  const double diff = std::fabs(static_cast<double>(f1.num) / f1.den - static_cast<double>(f2.num) / f2.den);
  const double bound = constants::C_ams * std::sqrt(diff);
  const bool vacuous = diff >= (8.0 / 60.0) * (8.0 / 60.0);
  const std::string note = to_string(f1) + " vs " + to_string(f2);
  for (int dir = 0; dir < 2; ++dir) {
    const Fraction& a = dir == 0 ? f1 : f2;
    const Fraction& b = dir == 0 ? f2 : f1;
    CheckRecord r = check_less(dir == 0 ? "ams.forward" : "ams.backward", hausdorff_gap(a, b), bound);
    r.p = a.num;
    r.q = a.den;
    r.vacuous = vacuous;
    r.note = note;
    rep.checks.push_back(r);
  }
  return rep;
}

namespace {

std::pair<Fraction, Fraction> levels(const ContinuedFraction& cf, int n) {
  if (!parity_check(cf)) throw std::invalid_argument("parity condition violated for " + to_string(cf));
  if (n < 1 || static_cast<std::size_t>(n) + 1 > cf.size())
    throw std::invalid_argument("level n must satisfy 1 <= n < length of the expansion");
  const std::vector<Fraction> conv = convergents(cf);
  return {conv[static_cast<std::size_t>(n - 1)], conv[static_cast<std::size_t>(n)]};
}

std::vector<Interval> gaps_of(const BandStructure& bs) {
  const std::vector<Interval> bands = band_intervals(bs);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < bands.size(); ++i) out.push_back({bands[i].hi, bands[i + 1].lo});
  return out;
}

}  // namespace

ContainmentReport check_containment(const ContinuedFraction& cf, int n) {
  const auto [fn, fm] = levels(cf, n);
  ContainmentReport rep;
  rep.n = n;
  rep.level_n = fn;
  rep.level_next = fm;
  const BandStructure a = structure(fn.num, fn.den);
  const BandStructure b = structure(fm.num, fm.den);
  rep.E2 = a.mu(0);
  rep.E0 = b.mu(0);
  rep.central_band = {b.left(0), b.right(0)};
  rep.gap0_closure = {b.right(0), b.left(1)};
  rep.gap_minus1_closure = {b.right(-1), b.left(0)};
  rep.margin = std::min(rep.E2 - rep.gap0_closure.hi, rep.gap_minus1_closure.lo + rep.E2);
  rep.contained = rep.margin > 0.0;
  return rep;
}

InheritanceReport check_gap_inheritance(const ContinuedFraction& cf, int n, const InheritanceOptions& opts) {
  const auto [fn, fm] = levels(cf, n);
  InheritanceReport rep;
  rep.n = n;
  rep.level_n = fn;
  rep.level_next = fm;
  if (fn.den < 3) {
    rep.vacuous = true;
    return rep;
  }
  const BandStructure a = structure(fn.num, fn.den);
  const std::vector<Interval> next = gaps_of(structure(fm.num, fm.den));
  const double log_C4 = opts.log_C4 != 0.0 ? opts.log_C4 : constants::log_C4;
  const double log_thr = -(log_C4 + 0.5 * opts.kappa * std::log(static_cast<double>(fn.den)));
  for (int g : {-1, 0}) {
    InheritanceRow row;
    row.gap_index = g;
    row.gap = {a.right(g), a.left(g + 1)};
    for (const Interval& h : next)
      row.overlap = std::max(row.overlap, std::min(row.gap.hi, h.hi) - std::max(row.gap.lo, h.lo));
    row.log_threshold = log_thr;
    row.exceeds_threshold = row.overlap > 0.0 && std::log(row.overlap) > log_thr;
    rep.rows.push_back(row);
  }
  return rep;
}

Suite parse_suite(const std::string& name) {
  if (name == "all") return Suite::All;
  if (name == "lemma1") return Suite::Lemma1;
  if (name == "lemma2") return Suite::Lemma2;
  if (name == "thm3") return Suite::Thm3;
  if (name == "thm4") return Suite::Thm4;
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::All: return "all";
    case Suite::Lemma1: return "lemma1";
    case Suite::Lemma2: return "lemma2";
    case Suite::Thm3: return "thm3";
    case Suite::Thm4: return "thm4";
  }
  return "?";
}

SuiteResult run_suite(Suite suite, const ContinuedFraction& cf) {
  const Fraction f = evaluate(cf);
  const bool admissible = parity_check(cf);
  if (!admissible && (suite == Suite::Lemma2 || suite == Suite::Thm3 || suite == Suite::Thm4))
    throw std::invalid_argument("parity condition violated for " + to_string(cf));
  SuiteResult out;
  const BandStructure bs = structure(f.num, f.den);
  const bool all = suite == Suite::All;
  if (all || suite == Suite::Lemma1) {
    if (bs.q >= 3) {
      out.report.append(check_lemma1(bs));
      out.report.append(check_cey_products(bs));
    }
    out.report.append(check_last_bounds(bs));
  }
  if (all && !admissible) {
    CheckRecord r;
    r.name = "parity_condition";
    r.p = f.num;
    r.q = f.den;
    r.pass = false;
    r.asserting = false;
    r.note = "lemma2, thm3 and thm4 checks skipped";
    out.report.checks.push_back(r);
    return out;
  }
  if (all || suite == Suite::Lemma2) out.report.append(check_lemma2(bs));
  if ((all || suite == Suite::Thm3) && bs.q >= 3) out.report.append(check_theorem3(bs));
  if (all || suite == Suite::Thm4) {
    const std::vector<Fraction> conv = convergents(cf);
    for (int n = 1; static_cast<std::size_t>(n) < cf.size(); ++n) {
      out.containment.push_back(check_containment(cf, n));
      out.inheritance.push_back(check_gap_inheritance(cf, n));
      out.report.append(check_ams_continuity(conv[static_cast<std::size_t>(n - 1)], conv[static_cast<std::size_t>(n)]));
    }
  }
  return out;
}

SuiteResult run_suite(Suite suite, std::int64_t p, std::int64_t q) {
  return run_suite(suite, expand(make_fraction(p, q)));
}

}  // namespace amo
