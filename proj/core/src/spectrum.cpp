#include "amo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "amo/discriminant.hpp"

namespace amo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPivMin = 1e-290;
const double kLn4 = std::log(4.0);

int sturm_count(const std::vector<double>& b2, double x) {
  double d = -x;
  if (std::fabs(d) < kPivMin) d = -kPivMin;
  int c = d < 0;
  for (double b : b2) {
    d = -x - b / d;
    if (std::fabs(d) < kPivMin) d = -kPivMin;
    c += d < 0;
  }
  return c;
}

struct PivotEval {
  int count;
  double ratio;  // f'/f of the characteristic polynomial
};

PivotEval pivot_eval(const std::vector<double>& b2, double x) {
  double d = -x, dd = -1.0;
  if (std::fabs(d) < kPivMin) d = -kPivMin;
  int c = d < 0;
  double r = dd / d;
  for (double b : b2) {
    const double t = b / d;
    double dn = -x - t;
    const double ddn = -1.0 + t * dd / d;
    if (std::fabs(dn) < kPivMin) dn = -kPivMin;
    d = dn;
    dd = ddn;
    c += d < 0;
    r += dd / d;
  }
  return {c, r};
}

// Safeguarded Newton for the single eigenvalue in (lo, hi); clo eigenvalues lie below lo.
double polish(const std::vector<double>& b2, double lo, double hi, int clo) {
  double x = 0.5 * (lo + hi);
  double dx_old = hi - lo;
  for (int it = 0; it < 200; ++it) {
    const PivotEval e = pivot_eval(b2, x);
    if (e.count > clo)
      hi = x;
    else
      lo = x;
    double step = (std::isfinite(e.ratio) && e.ratio != 0.0) ? -1.0 / e.ratio : std::numeric_limits<double>::quiet_NaN();
    double xn = x + step;
    if (!(std::isfinite(xn) && xn > lo && xn < hi && std::fabs(step) <= 0.5 * std::fabs(dx_old))) {
      xn = 0.5 * (lo + hi);
      step = xn - x;
    }
    dx_old = step;
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    if (std::fabs(step) <= 2.0 * kEps * std::fabs(x) || hi - lo <= 2.0 * kEps * scale) return xn;
    x = xn;
  }
  return x;
}

struct Bracket {
  double lo, hi;
  int clo, chi;
};

void isolate(const std::vector<double>& b2, Bracket root, std::vector<double>& out, int& unresolved) {
  std::vector<Bracket> stack{root};
  while (!stack.empty()) {
    Bracket b = stack.back();
    stack.pop_back();
    const int m = b.chi - b.clo;
    if (m <= 0) continue;
    if (m == 1) {
      out.push_back(polish(b2, b.lo, b.hi, b.clo));
      continue;
    }
    const double scale = std::max({std::fabs(b.lo), std::fabs(b.hi), 1e-300});
    if (b.hi - b.lo <= 4.0 * kEps * scale) {
      for (int i = 0; i < m; ++i) out.push_back(0.5 * (b.lo + b.hi));
      unresolved += m - 1;
      continue;
    }
    const double mid = 0.5 * (b.lo + b.hi);
    const int c = sturm_count(b2, mid);
    stack.push_back({mid, b.hi, c, b.chi});
    stack.push_back({b.lo, mid, b.clo, c});
  }
}

struct OffsetResult {
  double value;
  bool ok;
};

// Solves x * prod_{k != self} |d_k + side x| = 4 for the root closest to 0.
// ln of the left side is concave between consecutive zeros, so Newton started
// where it is negative increases monotonically to the root.
OffsetResult solve_offset(const std::vector<double>& d, std::size_t self, int side, double ell, double limit) {
  const std::size_t n = d.size();
  auto H = [&](double x, double& deriv) {
    double prod = x, der = 1.0 / x;
    long e = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == self) continue;
      const double f = d[k] + side * x;
      prod *= std::fabs(f);
      der += side / f;
      if (prod > 0x1p+500 || prod < 0x1p-500) {
        int ee = 0;
        prod = std::frexp(prod, &ee);
        e += ee;
      }
    }
    deriv = der;
    return std::log(prod) + static_cast<double>(e) * std::numbers::ln2 - kLn4;
  };
  double x = 0.5 * ell;
  if (std::isfinite(limit)) x = std::min(x, 0.5 * limit);
  if (!(x > 0.0)) return {0.0, false};
  double hp = 0.0;
  double h = H(x, hp);
  for (int guard = 0; h >= 0.0 && guard < 2000; ++guard) {
    x *= 0.5;
    h = H(x, hp);
  }
  if (h >= 0.0) return {x, false};
  for (int it = 0; it < 200; ++it) {
    if (!(hp > 0.0) || !std::isfinite(hp)) return {x, false};
    const double step = -h / hp;
    const double xn = x + step;
    if (!(xn < limit)) return {x, false};
    if (step <= 4.0 * kEps * x) return {xn, true};
    x = xn;
    h = H(x, hp);
    if (h >= 0.0) return {x, true};
  }
  return {x, false};
}

using RowFn = std::function<void(std::int64_t j, std::vector<double>& row)>;

// Double: plain differences, tiny gaps are flagged.  Probe: accurate differences,
// failures are flagged instead of thrown.  Final: accurate differences, strict.
enum class Mode { Double, Probe, Final };

BandStructure assemble(std::int64_t p, std::int64_t q, std::vector<double> lambda, const RowFn& row_of, Mode mode,
                       int unresolved, const std::vector<detail::GapOverride>& overrides = {}) {
  const bool mp = mode != Mode::Double;
  BandStructure bs;
  bs.p = p;
  bs.q = q;
  bs.s = (q - 1) / 2;
  bs.mu_sign = (q % 4 == 3) ? 1 : -1;
  bs.multiprecision = mp;
  bs.unresolved = unresolved;
  const std::int64_t s = bs.s;
  const std::size_t n = static_cast<std::size_t>(q);
  bs.lambda = std::move(lambda);
  bs.w.assign(n, 0.0);
  bs.w_prime.assign(n, 0.0);
  bs.ell.assign(n, 0.0);
  bs.log_abs_sigma_prime.assign(n, 0.0);
  bs.center_gap.assign(n - 1, 0.0);
  bs.delta.assign(n - 1, 0.0);
  bs.below_resolution.assign(n - 1, 0);

  const double resolution = mp ? 0.0 : 1e-13;
  std::vector<double> row(n);
  std::vector<std::uint8_t> touching(n - 1, 0);
  std::vector<const detail::GapOverride*> fixed(n - 1, nullptr);
  for (const auto& o : overrides)
    if (o.i >= static_cast<std::size_t>(s) && o.i + 1 < n) fixed[o.i] = &o;
  for (std::int64_t j = 0; j <= s; ++j) {
    const std::size_t i = static_cast<std::size_t>(j + s);
    row_of(j, row);
    double log_x = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      log_x += std::log(std::max(std::fabs(row[k]), resolution));
    }
    bs.log_abs_sigma_prime[i] = log_x;
    const double ell = std::exp(kLn4 - log_x);
    bs.ell[i] = ell;
    const double sep_right = (i + 1 < n) ? -row[i + 1] : std::numeric_limits<double>::infinity();
    if (i + 1 < n) bs.center_gap[i] = sep_right;

    auto offset = [&](int side, double sep, std::size_t gap_index, bool has_gap) {
      if (has_gap && !(sep > resolution)) {
        touching[gap_index] = 1;
        return 0.0;
      }
      OffsetResult r = solve_offset(row, i, side, ell, sep);
      if (!r.ok) {
        if (mode == Mode::Final || !has_gap)
          throw std::runtime_error("interlacing violated while solving band edge at p/q = " + std::to_string(p) + "/" +
                                   std::to_string(q) + ", j = " + std::to_string(j));
        touching[gap_index] = 1;
        return 0.5 * sep;
      }
      return r.value;
    };
    bs.w[i] = (i + 1 < n && fixed[i]) ? fixed[i]->w_right : offset(+1, sep_right, i, i + 1 < n);
    if (j == 0) {
      bs.w_prime[i] = bs.w[i];
    } else {
      bs.w_prime[i] = fixed[i - 1] ? fixed[i - 1]->w_left : offset(-1, row[i - 1], i - 1, true);
    }
  }
  // mirror the j >= 0 half
  for (std::int64_t j = 1; j <= s; ++j) {
    const std::size_t i = static_cast<std::size_t>(s + j), m = static_cast<std::size_t>(s - j);
    bs.w[m] = bs.w_prime[i];
    bs.w_prime[m] = bs.w[i];
    bs.ell[m] = bs.ell[i];
    bs.log_abs_sigma_prime[m] = bs.log_abs_sigma_prime[i];
  }
  for (std::int64_t j = 0; j < s; ++j) {
    const std::size_t i = static_cast<std::size_t>(s + j), m = static_cast<std::size_t>(s - j - 1);
    bs.center_gap[m] = bs.center_gap[i];
    if (touching[i]) touching[m] = 1;
  }
  for (std::int64_t j = 0; j < s; ++j) {
    const std::size_t i = static_cast<std::size_t>(s + j), m = static_cast<std::size_t>(s - j - 1);
    double gap = fixed[i] ? fixed[i]->delta : bs.center_gap[i] - bs.w[i] - bs.w_prime[i + 1];
    bool flag = touching[i] != 0;
    if (!mp && gap < 1e-12) flag = true;
    if (gap < 0.0) flag = true;
    if (flag) gap = 0.0;
    bs.delta[i] = bs.delta[m] = gap;
    bs.below_resolution[i] = bs.below_resolution[m] = flag ? 1 : 0;
  }
  return bs;
}

BandStructure trivial_structure(std::int64_t p) {
  BandStructure bs;
  bs.p = p;
  bs.q = 1;
  bs.s = 0;
  bs.mu_sign = -1;
  bs.lambda = {0.0};
  bs.w = {4.0};
  bs.w_prime = {4.0};
  bs.ell = {4.0};
  bs.log_abs_sigma_prime = {0.0};
  return bs;
}

void require_odd(std::int64_t p, std::int64_t q) {
  require_coprime(p, q);
  if (q % 2 == 0)
    throw std::invalid_argument("even q (" + std::to_string(p) + "/" + std::to_string(q) +
                                ") is not supported by band extraction");
}

}  // namespace

namespace detail {

std::vector<double> jacobi_eigenvalues(const std::vector<double>& b2, int* unresolved) {
  const int n = static_cast<int>(b2.size()) + 1;
  int extra = 0;
  std::vector<double> pos;
  double bound = 0.0;
  for (std::size_t k = 0; k <= b2.size(); ++k) {
    double r = (k > 0 ? std::sqrt(b2[k - 1]) : 0.0) + (k < b2.size() ? std::sqrt(b2[k]) : 0.0);
    bound = std::max(bound, r);
  }
  bound = bound * (1.0 + 1e-12) + 1e-12;
  // the spectrum is symmetric about 0; isolate the positive half
  const double tiny = 1e-300;
  const int c0 = sturm_count(b2, tiny);
  isolate(b2, {tiny, bound, c0, n}, pos, extra);
  std::sort(pos.begin(), pos.end());
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(n));
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) all.push_back(-*it);
  if (n % 2 == 1) all.push_back(0.0);
  all.insert(all.end(), pos.begin(), pos.end());
  if (unresolved) *unresolved = 2 * extra;
  return all;
}

}  // namespace detail

std::vector<double> band_centers(std::int64_t p, std::int64_t q) {
  require_coprime(p, q);
  if (q == 1) return {0.0};
  Discriminant d(p, q);
  return detail::jacobi_eigenvalues(d.offdiagonal_squared());
}

BandStructure band_edges(std::int64_t p, std::int64_t q, const std::vector<double>& centers) {
  require_odd(p, q);
  if (q == 1) return trivial_structure(p);
  if (centers.size() != static_cast<std::size_t>(q)) throw std::invalid_argument("band_edges: expected q centers");
  for (std::size_t i = 1; i < centers.size(); ++i)
    if (!(centers[i] >= centers[i - 1])) throw std::invalid_argument("band_edges: centers must be sorted");
  const std::int64_t s = (q - 1) / 2;
  RowFn row = [&](std::int64_t j, std::vector<double>& out) {
    const double lj = centers[static_cast<std::size_t>(j + s)];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = lj - centers[k];
  };
  int unresolved = 0;
  for (std::size_t i = 1; i < centers.size(); ++i)
    if (centers[i] == centers[i - 1]) ++unresolved;
  return assemble(p, q, centers, row, Mode::Double, unresolved);
}

BandStructure extract_band_structure(std::int64_t p, std::int64_t q, const SpectrumOptions& opts) {
  require_odd(p, q);
  if (q == 1) return trivial_structure(p);
  Discriminant disc(p, q);
  int unresolved = 0;
  std::vector<double> lambda = detail::jacobi_eigenvalues(disc.offdiagonal_squared(), &unresolved);
  const std::int64_t s = (q - 1) / 2;
  const std::size_t n = static_cast<std::size_t>(q);

  BandStructure bs = [&] {
    if (opts.precision == Precision::Double) return band_edges(p, q, lambda);
    try {
      return band_edges(p, q, lambda);
    } catch (const std::runtime_error&) {
      BandStructure empty;
      empty.q = 0;
      return empty;
    }
  }();
  if (opts.precision == Precision::Double) {
    bs.unresolved = unresolved;
    return bs;
  }

  // Auto: refine every center on the positive side that touches a small
  // separation or a small gap, then rebuild from accurate differences.
  std::vector<std::uint8_t> want(n, 0);
  for (std::size_t i = static_cast<std::size_t>(s); i + 1 < n; ++i) {
    const double sep = lambda[i + 1] - lambda[i];
    bool small = !(sep >= opts.refine_below);
    if (bs.q != 0 && !(bs.delta[i] >= opts.refine_below)) small = true;
    if (bs.q != 0 && bs.below_resolution[i]) small = true;
    if (small) {
      if (i > static_cast<std::size_t>(s)) want[i] = 1;
      want[i + 1] = 1;
    }
  }
  if (bs.q != 0 && unresolved == 0 && std::none_of(want.begin(), want.end(), [](auto v) { return v != 0; })) return bs;

  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < n; ++i)
    if (want[i]) targets.push_back(i);
  detail::MpRefiner refiner(p, q);
  detail::RefinedCenters rc = refiner.refine(lambda, targets);
  RowFn row = [&](std::int64_t j, std::vector<double>& out) { out = rc.diff[static_cast<std::size_t>(j)]; };
  const BandStructure probe = assemble(p, q, rc.lambda, row, Mode::Probe, 0);
  // a gap much smaller than its center separation loses relative accuracy in
  // double, so its edges are recomputed at the critical point
  std::vector<std::size_t> hard;
  for (std::size_t i = static_cast<std::size_t>(s); i + 1 < n; ++i)
    if (probe.below_resolution[i] || !(probe.delta[i] >= 1e-3 * probe.center_gap[i])) hard.push_back(i);
  if (hard.empty()) {
    BandStructure refined = probe;
    refined.max_digits = refiner.max_digits();
    return refined;
  }
  const std::vector<detail::GapOverride> overrides = refiner.solve_gaps(hard);
  BandStructure refined = assemble(p, q, rc.lambda, row, Mode::Final, 0, overrides);
  refined.max_digits = refiner.max_digits();
  return refined;
}

double measure(const BandStructure& bs) {
  double total = 0.0;
  for (std::size_t i = 0; i < bs.w.size(); ++i) total += bs.w[i] + bs.w_prime[i];
  return total;
}

double last_wilkinson_sum(const BandStructure& bs) {
  std::vector<double> terms(bs.log_abs_sigma_prime.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = -bs.log_abs_sigma_prime[i];
  return std::exp(log_sum_exp(terms));
}

double last_wilkinson_residual(const BandStructure& bs) {
  return std::fabs(last_wilkinson_sum(bs) - 1.0 / static_cast<double>(bs.q));
}

double last_wilkinson_residual(std::int64_t p, std::int64_t q) {
  return last_wilkinson_residual(extract_band_structure(p, q));
}

std::vector<Interval> band_intervals(const BandStructure& bs) {
  std::vector<Interval> out;
  for (std::int64_t j = -bs.s; j <= bs.s; ++j) {
    Interval iv{bs.left(j), bs.right(j)};
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

std::vector<Interval> sampled_band_intervals(std::int64_t p, std::int64_t q) {
  require_coprime(p, q);
  if (q == 1) return {{-4.0, 4.0}};
  Discriminant disc(p, q);
  const double ln4 = kLn4;
  auto inside = [&](double E) {
    ScaledReal v = disc.sigma(E);
    return v.sign == 0 || v.log_mag <= ln4;
  };
  std::vector<double> lam = detail::jacobi_eigenvalues(disc.offdiagonal_squared());
  // boundary between an inside point a and an outside point b
  auto crossing = [&](double a, double b) {
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (a + b);
      if (m == a || m == b) break;
      if (inside(m))
        a = m;
      else
        b = m;
    }
    return a;
  };
  const std::size_t n = lam.size();
  std::vector<Interval> bands(n);
  for (std::size_t i = 0; i < n; ++i) bands[i] = {lam[i], lam[i]};
  bands.front().lo = inside(lam.front()) ? crossing(lam.front(), -4.0 - 1e-9) : lam.front();
  bands.back().hi = inside(lam.back()) ? crossing(lam.back(), 4.0 + 1e-9) : lam.back();
  std::vector<std::uint8_t> merged(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = lam[i], b = lam[i + 1];
    if (!(b > a)) {
      merged[i] = 1;
      continue;
    }
    // adaptive grid: coarse sampling, refined where nothing outside was found
    double first_out = 0.0, last_out = 0.0;
    bool found = false;
    for (int npts = 32; npts <= 4096 && !found; npts *= 8) {
      for (int k = 1; k < npts; ++k) {
        const double x = a + (b - a) * k / npts;
        if (!inside(x)) {
          if (!found) first_out = x;
          last_out = x;
          found = true;
        }
      }
    }
    if (!found) {
      merged[i] = 1;
      continue;
    }
    if (inside(a)) bands[i].hi = crossing(a, first_out);
    if (inside(b)) bands[i + 1].lo = crossing(b, last_out);
  }
  std::vector<Interval> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && (merged[i - 1] || bands[i].lo <= out.back().hi))
      out.back().hi = std::max(out.back().hi, bands[i].hi);
    else
      out.push_back(bands[i]);
  }
  return out;
}

double hausdorff_one_sided(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  auto dist = [&](double x) {
    auto it = std::lower_bound(b.begin(), b.end(), x, [](const Interval& iv, double v) { return iv.hi < v; });
    double best = std::numeric_limits<double>::infinity();
    if (it != b.end()) best = (x >= it->lo) ? 0.0 : it->lo - x;
    if (it != b.begin()) best = std::min(best, x - std::prev(it)->hi);
    return best;
  };
  double worst = 0.0;
  for (const Interval& iv : a) {
    worst = std::max({worst, dist(iv.lo), dist(iv.hi)});
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      const double mid = 0.5 * (b[k].hi + b[k + 1].lo);
      if (mid > iv.lo && mid < iv.hi) worst = std::max(worst, dist(mid));
    }
  }
  return worst;
}

double hausdorff_gap(const Fraction& from, const Fraction& to) {
  auto spec = [](const Fraction& f) {
    if (f.den % 2 == 1) return band_intervals(extract_band_structure(f.num, f.den));
    return sampled_band_intervals(f.num, f.den);
  };
  return hausdorff_one_sided(spec(from), spec(to));
}

EdgeLine::EdgeLine(const BandStructure& bs) : s_(bs.s) {
  const std::size_t n = static_cast<std::size_t>(bs.q);
  seg_.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    seg_.push_back(bs.w_prime[i]);
    seg_.push_back(bs.w[i]);
    if (i + 1 < n) seg_.push_back(bs.delta[i]);
  }
  prefix_.assign(seg_.size() + 1, 0.0L);
  for (std::size_t i = 0; i < seg_.size(); ++i) prefix_[i + 1] = prefix_[i] + seg_[i];
}

double EdgeLine::distance(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  const double coarse = static_cast<double>(prefix_[b] - prefix_[a]);
  if (coarse > 1e-4) return coarse;
  double sum = 0.0;
  for (std::size_t i = a; i < b; ++i) sum += seg_[i];
  return sum;
}

}  // namespace amo
