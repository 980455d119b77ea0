#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amo/contfrac.hpp"
#include "amo/spectrum.hpp"

namespace amo {

struct CheckRecord {
  std::string name;
  std::int64_t p = 0, q = 0;
  std::optional<std::int64_t> j, k;
  // For log-scale checks lhs and rhs are natural logs of the compared quantities.
  double lhs = 0.0, rhs = 0.0;
  double slack = 0.0;
  bool pass = true;
  bool marginal = false;
  bool equality = false;
  bool asserting = true;
  bool log_scale = false;
  bool vacuous = false;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckRecord> checks;

  bool passed() const;  // every asserting check passes
  std::size_t failures() const;
  void append(const VerificationReport& other);
  // canonical order: name, then p, q, j, k
  void sort();
};

// a > b within the relative tolerance 1e-9 max(1, |a|, |b|).
CheckRecord check_greater(std::string name, double a, double b);
// |a - b| <= tol max(1, |a|, |b|)
CheckRecord check_close(std::string name, double a, double b, double tol);

VerificationReport check_lemma1(const BandStructure& bs);
VerificationReport check_lemma1(std::int64_t p, std::int64_t q);
VerificationReport check_cey_products(const BandStructure& bs);
VerificationReport check_cey_products(std::int64_t p, std::int64_t q);
// (sqrt5-1)/2 l_j < w_j, w'_j < e l_j; sum rule; measure <= 8e/q; w_j < 4e/q.
VerificationReport check_last_bounds(const BandStructure& bs);
VerificationReport check_lemma2(const BandStructure& bs);
VerificationReport check_lemma2(std::int64_t p, std::int64_t q);
VerificationReport check_theorem3(const BandStructure& bs);
VerificationReport check_theorem3(std::int64_t p, std::int64_t q);

VerificationReport check_ams_continuity(const Fraction& f1, const Fraction& f2);

struct ContainmentReport {
  int n = 0;
  Fraction level_n, level_next;
  double E2 = 0.0;  // mu_0 at level n
  double E0 = 0.0;  // mu_0 at level n+1
  Interval central_band;
  Interval gap0_closure, gap_minus1_closure;
  double margin = 0.0;  // E2 minus the right end of the closure of G_0 at level n+1
  bool contained = false;
};
ContainmentReport check_containment(const ContinuedFraction& cf, int n);

struct InheritanceOptions {
  double kappa = 56.0;
  double log_C4 = 0.0;  // 0 selects ln(2 C2^2)
};

struct InheritanceRow {
  int gap_index = 0;  // 0 or -1 at level n
  Interval gap;       // at level n
  double overlap = 0.0;  // longest overlap with a gap of level n+1
  double log_threshold = 0.0;  // ln of 1 / (C4 q_n^(kappa/2))
  bool exceeds_threshold = false;
};

struct InheritanceReport {
  int n = 0;
  Fraction level_n, level_next;
  bool vacuous = false;
  std::vector<InheritanceRow> rows;
};
InheritanceReport check_gap_inheritance(const ContinuedFraction& cf, int n, const InheritanceOptions& opts = {});

enum class Suite { All, Lemma1, Lemma2, Thm3, Thm4 };
Suite parse_suite(const std::string& name);
std::string to_string(Suite s);

struct SuiteResult {
  VerificationReport report;
  std::vector<ContainmentReport> containment;
  std::vector<InheritanceReport> inheritance;
};

// Runs a suite on p/q = value of cf. The lemma2 and thm3 suites need the parity
// condition and report std::invalid_argument("parity condition violated") otherwise.
SuiteResult run_suite(Suite suite, const ContinuedFraction& cf);
SuiteResult run_suite(Suite suite, std::int64_t p, std::int64_t q);

}  // namespace amo
