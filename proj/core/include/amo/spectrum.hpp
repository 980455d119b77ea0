#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "amo/contfrac.hpp"

namespace amo {

enum class Precision {
  Double,  // everything in double; near-degenerate centers are flagged, not resolved
  Auto,    // escalate close centers and tiny gaps to MPFR
};

struct SpectrumOptions {
  Precision precision = Precision::Auto;
  // Center separations or gaps below this trigger MPFR refinement in Auto mode.
  double refine_below = 1e-4;
};

// Band/gap structure of S(p/q) for odd q. Vectors holding per-band data are
// indexed by j + s for j in [-s, s]; per-gap vectors by j + s for j in [-s, s-1].
struct BandStructure {
  std::int64_t p = 0, q = 1, s = 0;
  std::vector<double> lambda;
  std::vector<double> w;        // right half-width
  std::vector<double> w_prime;  // left half-width
  std::vector<double> ell;      // 4/|sigma'(lambda_j)|
  std::vector<double> log_abs_sigma_prime;
  std::vector<double> center_gap;  // lambda_{j+1} - lambda_j
  std::vector<double> delta;       // gap G_j between bands j and j+1
  std::vector<std::uint8_t> below_resolution;
  int mu_sign = 1;  // sigma(mu_j) = 4 * mu_sign
  bool multiprecision = false;
  int max_digits = 0;
  int unresolved = 0;

  std::size_t idx(std::int64_t j) const { return static_cast<std::size_t>(j + s); }
  double lambda_at(std::int64_t j) const { return lambda[idx(j)]; }
  double w_at(std::int64_t j) const { return w[idx(j)]; }
  double w_prime_at(std::int64_t j) const { return w_prime[idx(j)]; }
  double ell_at(std::int64_t j) const { return ell[idx(j)]; }
  double delta_at(std::int64_t j) const { return delta[idx(j)]; }
  double left(std::int64_t j) const { return lambda[idx(j)] - w_prime[idx(j)]; }
  double right(std::int64_t j) const { return lambda[idx(j)] + w[idx(j)]; }
  // mu_j is the right edge for even |j| and the left edge for odd |j|.
  double mu(std::int64_t j) const { return (j % 2 == 0) ? right(j) : left(j); }
  double eta(std::int64_t j) const { return (j % 2 == 0) ? left(j) : right(j); }
};

// Eigenvalues of the zero-diagonal Jacobi matrix (double precision Sturm
// bisection with Newton polishing), sorted. Any q >= 1.
std::vector<double> band_centers(std::int64_t p, std::int64_t q);

BandStructure extract_band_structure(std::int64_t p, std::int64_t q, const SpectrumOptions& opts = {});

// Edges from externally supplied centers (double arithmetic throughout).
BandStructure band_edges(std::int64_t p, std::int64_t q, const std::vector<double>& centers);

double measure(const BandStructure& bs);
double last_wilkinson_sum(const BandStructure& bs);
double last_wilkinson_residual(const BandStructure& bs);
double last_wilkinson_residual(std::int64_t p, std::int64_t q);

struct Interval {
  double lo = 0.0, hi = 0.0;
};

std::vector<Interval> band_intervals(const BandStructure& bs);

// sigma^{-1}([-4,4]) for any q, found by sampling |sigma| <= 4 between
// consecutive eigenvalues and refining the crossings. Touching bands are merged.
std::vector<Interval> sampled_band_intervals(std::int64_t p, std::int64_t q);

// sup over x in a of dist(x, b); both lists sorted and disjoint.
double hausdorff_one_sided(const std::vector<Interval>& a, const std::vector<Interval>& b);
double hausdorff_gap(const Fraction& from, const Fraction& to);

// The 3q points L_{-s}, lambda_{-s}, R_{-s}, L_{-s+1}, ... in increasing order.
// Distances are summed from the stored spacings so that points inside a cluster
// of nearly coincident bands keep their relative accuracy.
class EdgeLine {
 public:
  explicit EdgeLine(const BandStructure& bs);

  std::size_t left_id(std::int64_t j) const { return 3 * static_cast<std::size_t>(j + s_); }
  std::size_t center_id(std::int64_t j) const { return left_id(j) + 1; }
  std::size_t right_id(std::int64_t j) const { return left_id(j) + 2; }
  std::size_t mu_id(std::int64_t j) const { return j % 2 == 0 ? right_id(j) : left_id(j); }
  std::size_t eta_id(std::int64_t j) const { return j % 2 == 0 ? left_id(j) : right_id(j); }

  double distance(std::size_t a, std::size_t b) const;

 private:
  std::int64_t s_;
  std::vector<double> seg_;     // seg_[i] = position(i+1) - position(i)
  std::vector<long double> prefix_;  // prefix_[i] = position(i) - position(0)
};

namespace detail {

// Eigenvalues of the zero-diagonal Jacobi matrix with squared off-diagonals b2.
// Clusters that double precision cannot split are reported through `unresolved`
// (count of extra members) and placed at the cluster midpoint.
std::vector<double> jacobi_eigenvalues(const std::vector<double>& b2, int* unresolved = nullptr);

// Edges around the gap between centers i and i+1 (full sorted indices),
// solved locally around the critical point in MPFR.
struct GapOverride {
  std::size_t i = 0;
  double w_right = 0.0;  // right half-width of band i
  double w_left = 0.0;   // left half-width of band i+1
  double delta = 0.0;
};

struct RefinedCenters {
  // lambda_j - lambda_k for j >= 0 (row j, column k + s), accurate in the
  // refined rows/columns.
  std::vector<std::vector<double>> diff;
  std::vector<double> lambda;
  int max_digits = 0;
};

// MPFR refinement of band centers, keeping the refined values so that
// selected gaps can be solved afterwards at whatever precision they need.
class MpRefiner {
 public:
  MpRefiner(std::int64_t p, std::int64_t q);
  ~MpRefiner();
  MpRefiner(const MpRefiner&) = delete;
  MpRefiner& operator=(const MpRefiner&) = delete;

  // Refines the centers with full indices listed in `targets` (only those above
  // the middle are used; the rest follow by symmetry).
  RefinedCenters refine(const std::vector<double>& lambda, const std::vector<std::size_t>& targets);
  // Gap i lies between centers i and i+1, i >= s.
  std::vector<GapOverride> solve_gaps(const std::vector<std::size_t>& gaps);
  int max_digits() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace detail

}  // namespace amo
