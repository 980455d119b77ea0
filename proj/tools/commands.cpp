#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "amo/constants.hpp"
#include "amo/discriminant.hpp"
#include "amo/trigsums.hpp"
#include "butterfly.hpp"

namespace amo::tools {

namespace {

json frac(const Fraction& f) { return json{{"p", f.num}, {"q", f.den}}; }

json cplx(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json scaled(const ScaledReal& x) {
  json j{{"sign", x.sign}, {"log_abs", x.sign == 0 ? json(nullptr) : json(x.log_mag)}};
  j["value"] = x.representable() || x.sign == 0 ? json(x.to_double()) : json(nullptr);
  return j;
}

json consistency(const Consistency& c) {
  return json{{"discrepancy", c.discrepancy}, {"signs_agree", c.signs_agree}, {"multiprecision", c.multiprecision}};
}

json interval(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

json to_json(const BandStructure& bs) {
  json j{{"p", bs.p}, {"q", bs.q}, {"s", bs.s}};
  j["multiprecision"] = bs.multiprecision;
  j["max_digits"] = bs.max_digits;
  j["unresolved"] = bs.unresolved;
  json bands = json::array();
  for (const BandRow& r : band_rows(bs))
    bands.push_back(json{{"j", r.j},
                         {"lambda", r.lambda},
                         {"eta", r.eta},
                         {"mu", r.mu},
                         {"w", r.w},
                         {"w_prime", r.w_prime},
                         {"ell", r.ell},
                         {"log_abs_sigma_prime", bs.log_abs_sigma_prime[bs.idx(r.j)]}});
  json gaps = json::array();
  for (const GapRow& r : gap_rows(bs)) {
    const std::size_t i = bs.idx(r.j);
    gaps.push_back(json{{"j", r.j},
                        {"left", r.left},
                        {"right", r.right},
                        {"delta", r.delta},
                        {"center_gap", bs.center_gap[i]},
                        {"below_resolution", bs.below_resolution[i] != 0}});
  }
  j["bands"] = std::move(bands);
  j["gaps"] = std::move(gaps);
  j["measure"] = measure(bs);
  j["last_wilkinson_residual"] = last_wilkinson_residual(bs);
  return j;
}

json to_json(const CheckRecord& r) {
  json j{{"name", r.name}, {"p", r.p}, {"q", r.q}};
  if (r.j) j["j"] = *r.j;
  if (r.k) j["k"] = *r.k;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["pass"] = r.pass;
  j["asserting"] = r.asserting;
  if (r.log_scale) j["log_scale"] = true;
  if (r.marginal) j["marginal"] = true;
  if (r.equality) j["equality"] = true;
  if (r.vacuous) j["vacuous"] = true;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const CheckRecord& c : r.checks) checks.push_back(to_json(c));
  return json{{"passed", r.passed()}, {"checks", r.checks.size()}, {"failures", r.failures()}, {"records", checks}};
}

json to_json(const SuiteResult& r) {
  VerificationReport sorted = r.report;
  sorted.sort();
  json j = to_json(sorted);
  json cont = json::array();
  for (const ContainmentReport& c : r.containment)
    cont.push_back(json{{"n", c.n},
                        {"level_n", frac(c.level_n)},
                        {"level_next", frac(c.level_next)},
                        {"E2", c.E2},
                        {"E0", c.E0},
                        {"central_band", interval(c.central_band)},
                        {"gap0_closure", interval(c.gap0_closure)},
                        {"gap_minus1_closure", interval(c.gap_minus1_closure)},
                        {"margin", c.margin},
                        {"contained", c.contained}});
  json inh = json::array();
  for (const InheritanceReport& c : r.inheritance) {
    json rows = json::array();
    for (const InheritanceRow& row : c.rows)
      rows.push_back(json{{"gap_index", row.gap_index},
                          {"gap", interval(row.gap)},
                          {"overlap", row.overlap},
                          {"log_threshold", row.log_threshold},
                          {"exceeds_threshold", row.exceeds_threshold}});
    inh.push_back(json{{"n", c.n},
                       {"level_n", frac(c.level_n)},
                       {"level_next", frac(c.level_next)},
                       {"vacuous", c.vacuous},
                       {"rows", rows}});
  }
  if (!cont.empty()) j["containment"] = cont;
  if (!inh.empty()) j["gap_inheritance"] = inh;
  return j;
}

json to_json(const RecursionResult& r) {
  json levels = json::array();
  for (const RecursionLevel& lv : r.levels)
    levels.push_back(json{{"j", lv.j},
                          {"t", frac(lv.t)},
                          {"gamma", frac(lv.gamma)},
                          {"k_shift", lv.k_shift},
                          {"eps", lv.eps},
                          {"integral", lv.j == 1 ? "I" : "J"},
                          {"delta", lv.j == 1 ? json(nullptr) : json(lv.delta)},
                          {"coefficient", lv.coefficient},
                          {"value", cplx(lv.integral)},
                          {"abs", std::abs(lv.integral)},
                          {"bound", lv.bound}});
  return json{{"cf", to_string(r.cf)},
              {"k", r.k},
              {"levels", levels},
              {"boundary", cplx(r.boundary)},
              {"lhs", cplx(r.lhs)},
              {"rhs", cplx(r.rhs)},
              {"residual", r.residual},
              {"bounds_ok", r.bounds_ok}};
}

json cf_command(const ContinuedFraction& cf) {
  const Fraction f = evaluate(cf);
  json conv = json::array(), tl = json::array();
  for (const Fraction& c : convergents(cf)) conv.push_back(frac(c));
  for (const Fraction& t : tails(cf)) tl.push_back(frac(t));
  const double kappa = 56.0;
  json growth = json::array();
  for (const GrowthRow& g : growth_check(cf, kappa, std::exp(constants::log_C3)))
    growth.push_back(json{{"n", g.n},
                          {"q_n", g.q_n},
                          {"a_next", g.a_next},
                          {"q_next", g.q_next},
                          {"coefficient_ok", g.coefficient_ok},
                          {"denominator_ok", g.denominator_ok},
                          {"log_margin_coefficient", g.log_margin_coefficient},
                          {"log_margin_denominator", g.log_margin_denominator}});
  return json{{"fraction", frac(f)},
              {"coefficients", cf.a},
              {"convergents", conv},
              {"tails", tl},
              {"parity_condition", parity_check(cf)},
              {"tail_product_identity", tail_product_identity(cf)},
              {"length_bound_parity", length_bound_parity(f.den)},
              {"growth", {{"kappa", kappa}, {"log_c3", constants::log_C3}, {"rows", growth}}}};
}

json sigma_command(std::int64_t p, std::int64_t q, const std::vector<double>& energies) {
  Discriminant d(p, q);
  json pts = json::array();
  for (double E : energies) {
    json pt{{"E", E}, {"sigma", scaled(d.sigma(E))}, {"determinant", scaled(d.determinant(E))}};
    pt["derivative"] = scaled(sigma_prime(p, q, E));
    pt["consistency"] = consistency(d.consistency(E));
    pt["symmetry"] = consistency(d.symmetry(E));
    pts.push_back(pt);
  }
  json out{{"p", p}, {"q", q}, {"points", pts}};
  out["sigma_prime0"] = scaled(sigma_prime0(p, q));
  return out;
}

json sums_command(std::int64_t p, std::int64_t q, std::optional<std::int64_t> k_opt) {
  const std::int64_t s = (q - 1) / 2;
  std::vector<std::int64_t> ks;
  if (k_opt)
    ks.push_back(*k_opt);
  else
    for (std::int64_t k = 0; k <= s; ++k) ks.push_back(k);
  json rows = json::array();
  for (std::int64_t k : ks) {
    const SumContext ctx(p, q, k);
    double brute = 0.0;
    for (std::int64_t ell = 1; ell < q; ++ell) brute = std::max(brute, std::fabs(F(ell, ctx) - F_brute(ell, ctx)));
    const double ld = L_direct(ctx), lf = L_formula(ctx), sk = S_k(ctx), ds = digamma_sum(ctx);
    rows.push_back(json{{"k", k},
                        {"F", F_table(ctx)},
                        {"F_brute_max_diff", brute},
                        {"F_total", F_total(ctx)},
                        {"S_k", sk},
                        {"L_direct", ld},
                        {"L_formula", lf},
                        {"L_difference", std::fabs(ld - lf)},
                        {"digamma_sum", ds},
                        {"digamma_sum_bound", digamma_sum_bound(q)},
                        {"digamma_sum_slack", digamma_sum_bound(q) - std::fabs(ds)},
                        {"S_k_bound", sum_bound(q)},
                        {"S_k_slack", sum_bound(q) - std::fabs(sk)}});
  }
  json out{{"p", p}, {"q", q}, {"s", s}, {"rows", rows}};
  if (!k_opt) {
    std::vector<double> logs;
    for (std::int64_t k = 0; k <= s; ++k) logs.push_back(L_direct(SumContext(p, q, k)));
    const double via_sums = log_sum_exp(logs);
    const double direct = sigma_prime0(p, q).log_mag;
    out["log_abs_sigma_prime0_from_sums"] = via_sums;
    out["log_abs_sigma_prime0"] = direct;
    out["relative_difference"] = std::fabs(std::expm1(via_sums - direct));
  }
  return out;
}

json recursion_command(const ContinuedFraction& cf, std::int64_t k, const QuadratureConfig& cfg) {
  return to_json(recursion_check(cf, k, cfg));
}

json verify_batch(Suite suite, std::int64_t qmax, int jobs, bool* passed) {
  std::vector<ContinuedFraction> work;
  for (std::int64_t q = 1; q <= qmax; q += 2)
    for (std::int64_t p = 1; p <= q; ++p) {
      if (gcd(p, q) != 1) continue;
      ContinuedFraction cf = expand(make_fraction(p, q));
      if (parity_check(cf)) work.push_back(cf);
    }
  std::vector<VerificationReport> results(work.size());
  std::vector<std::string> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        results[i] = run_suite(suite, work[i]).report;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  VerificationReport all;
  json errs = json::array();
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (!errors[i].empty()) errs.push_back(json{{"frequency", frac(evaluate(work[i]))}, {"error", errors[i]}});
    all.append(results[i]);
  }
  all.sort();
  json failures = json::array();
  for (const CheckRecord& c : all.checks)
    if (c.asserting && !c.pass) failures.push_back(to_json(c));
  *passed = all.passed() && errs.empty();
  return json{{"suite", to_string(suite)},
              {"qmax", qmax},
              {"frequencies", work.size()},
              {"checks", all.checks.size()},
              {"passed", *passed},
              {"failures", failures},
              {"errors", errs}};
}

}  // namespace amo::tools
