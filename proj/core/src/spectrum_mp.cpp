#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "amo/spectrum.hpp"
#include "mp.hpp"

namespace amo::detail {

namespace {

struct PrecisionExhausted {};

class MpSturm {
 public:
  MpSturm(std::int64_t p, std::int64_t q, mpfr_prec_t bits)
      : bits_(bits), d_(bits), dd_(bits), t_(bits), u_(bits), dn_(bits), pivmin_(bits), d2_(bits), r_(bits),
        prod_(bits), inv_(bits) {
    b2_.reserve(static_cast<std::size_t>(q - 1));
    Mp b(bits);
    const std::int64_t pp = p % q;
    for (std::int64_t j = 1; j < q; ++j) {
      const long long jp = static_cast<long long>((static_cast<__int128>(j) * pp) % (2 * q));
      cos_pi_rational(b, 2 * jp - q, 2 * q);
      mpfr_mul_2ui(b.get(), b.get(), 1, MPFR_RNDN);
      Mp sq(bits);
      mpfr_sqr(sq.get(), b.get(), MPFR_RNDN);
      b2_.push_back(std::move(sq));
    }
    mpfr_set_ui_2exp(pivmin_.get(), 1, -8 * static_cast<long>(bits), MPFR_RNDN);
  }

  mpfr_prec_t bits() const { return bits_; }

  int count(const Mp& x) {
    mpfr_neg(d_.get(), x.get(), MPFR_RNDN);
    fix_pivot(d_);
    int c = d_.sign() < 0;
    for (const Mp& b : b2_) {
      mpfr_div(t_.get(), b.get(), d_.get(), MPFR_RNDN);
      mpfr_add(d_.get(), x.get(), t_.get(), MPFR_RNDN);
      mpfr_neg(d_.get(), d_.get(), MPFR_RNDN);
      fix_pivot(d_);
      c += d_.sign() < 0;
    }
    return c;
  }

  // Returns the count and stores f'/f of the characteristic polynomial in ratio.
  int eval(const Mp& x, Mp& ratio) {
    mpfr_neg(d_.get(), x.get(), MPFR_RNDN);
    fix_pivot(d_);
    mpfr_ui_div(inv_.get(), 1, d_.get(), MPFR_RNDN);
    mpfr_set_si(dd_.get(), -1, MPFR_RNDN);
    int c = d_.sign() < 0;
    mpfr_neg(ratio.get(), inv_.get(), MPFR_RNDN);
    for (const Mp& b : b2_) {
      mpfr_mul(t_.get(), b.get(), inv_.get(), MPFR_RNDN);
      mpfr_add(dn_.get(), x.get(), t_.get(), MPFR_RNDN);
      mpfr_neg(dn_.get(), dn_.get(), MPFR_RNDN);
      mpfr_mul(u_.get(), t_.get(), dd_.get(), MPFR_RNDN);
      mpfr_mul(u_.get(), u_.get(), inv_.get(), MPFR_RNDN);
      mpfr_sub_ui(dd_.get(), u_.get(), 1, MPFR_RNDN);
      mpfr_swap(d_.get(), dn_.get());
      fix_pivot(d_);
      c += d_.sign() < 0;
      mpfr_ui_div(inv_.get(), 1, d_.get(), MPFR_RNDN);
      mpfr_mul(u_.get(), dd_.get(), inv_.get(), MPFR_RNDN);
      mpfr_add(ratio.get(), ratio.get(), u_.get(), MPFR_RNDN);
    }
    return c;
  }

 private:
  void fix_pivot(Mp& d) {
    if (mpfr_zero_p(d.get())) mpfr_neg(d.get(), pivmin_.get(), MPFR_RNDN);
  }

  mpfr_prec_t bits_;
  std::vector<Mp> b2_;
  Mp d_, dd_, t_, u_, dn_, pivmin_, d2_, r_, prod_, inv_;

 public:
  // ln|f(x)|, (ln f)'(x) and (ln f)''(x) for the characteristic polynomial f.
  int eval_full(const Mp& x, Mp& logabs, Mp& g, Mp& gp) {
    mpfr_neg(d_.get(), x.get(), MPFR_RNDN);
    fix_pivot(d_);
    int c = d_.sign() < 0;
    mpfr_ui_div(inv_.get(), 1, d_.get(), MPFR_RNDN);
    mpfr_set_si(dd_.get(), -1, MPFR_RNDN);
    mpfr_set_zero(d2_.get(), 1);
    mpfr_abs(prod_.get(), d_.get(), MPFR_RNDN);
    accumulate(g, gp, true);
    for (const Mp& b : b2_) {
      // t = b/d; d_new = -x - t; d1_new = -1 + t d1/d; d2_new = (t/d)(d2 - 2 d1^2/d)
      mpfr_mul(t_.get(), b.get(), inv_.get(), MPFR_RNDN);
      mpfr_add(dn_.get(), x.get(), t_.get(), MPFR_RNDN);
      mpfr_neg(dn_.get(), dn_.get(), MPFR_RNDN);
      mpfr_mul(t_.get(), t_.get(), inv_.get(), MPFR_RNDN);  // t/d from here on
      mpfr_sqr(u_.get(), dd_.get(), MPFR_RNDN);
      mpfr_mul(u_.get(), u_.get(), inv_.get(), MPFR_RNDN);
      mpfr_mul_2ui(u_.get(), u_.get(), 1, MPFR_RNDN);
      mpfr_sub(d2_.get(), d2_.get(), u_.get(), MPFR_RNDN);
      mpfr_mul(d2_.get(), d2_.get(), t_.get(), MPFR_RNDN);
      mpfr_mul(u_.get(), t_.get(), dd_.get(), MPFR_RNDN);
      mpfr_sub_ui(dd_.get(), u_.get(), 1, MPFR_RNDN);
      mpfr_swap(d_.get(), dn_.get());
      fix_pivot(d_);
      c += d_.sign() < 0;
      mpfr_ui_div(inv_.get(), 1, d_.get(), MPFR_RNDN);
      mpfr_mul(prod_.get(), prod_.get(), d_.get(), MPFR_RNDN);
      accumulate(g, gp, false);
    }
    mpfr_abs(prod_.get(), prod_.get(), MPFR_RNDN);
    mpfr_log(logabs.get(), prod_.get(), MPFR_RNDN);
    return c;
  }

 private:
  // g += d1/d, gp += d2/d - (d1/d)^2
  void accumulate(Mp& g, Mp& gp, bool first) {
    mpfr_mul(r_.get(), dd_.get(), inv_.get(), MPFR_RNDN);
    mpfr_mul(u_.get(), d2_.get(), inv_.get(), MPFR_RNDN);
    if (first) {
      mpfr_set(g.get(), r_.get(), MPFR_RNDN);
      mpfr_sqr(gp.get(), r_.get(), MPFR_RNDN);
      mpfr_sub(gp.get(), u_.get(), gp.get(), MPFR_RNDN);
      return;
    }
    mpfr_add(g.get(), g.get(), r_.get(), MPFR_RNDN);
    mpfr_add(gp.get(), gp.get(), u_.get(), MPFR_RNDN);
    mpfr_sqr(r_.get(), r_.get(), MPFR_RNDN);
    mpfr_sub(gp.get(), gp.get(), r_.get(), MPFR_RNDN);
  }
};

bool within(const Mp& x, const Mp& lo, const Mp& hi) { return mpfr_greater_p(x.get(), lo.get()) && mpfr_less_p(x.get(), hi.get()); }

Mp polish(MpSturm& S, Mp lo, Mp hi, int clo, const Mp& seed) {
  const mpfr_prec_t bits = S.bits();
  Mp x(bits);
  mpfr_set(x.get(), seed.get(), MPFR_RNDN);
  if (!within(x, lo, hi)) {
    mpfr_add(x.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
  }
  Mp ratio(bits), step(bits), xn(bits), dx_old(bits), half(bits), width(bits), tol(bits);
  mpfr_sub(dx_old.get(), hi.get(), lo.get(), MPFR_RNDN);
  // a simple root converges in a handful of Newton steps once the working
  // precision resolves its neighbours; a long bisection run means it does not
  for (long it = 0; it < 120; ++it) {
    const int c = S.eval(x, ratio);
    if (c > clo)
      mpfr_set(hi.get(), x.get(), MPFR_RNDN);
    else
      mpfr_set(lo.get(), x.get(), MPFR_RNDN);
    // converged when the step or the bracket is a few ulps of the scale
    mpfr_abs(tol.get(), x.get(), MPFR_RNDN);
    if (mpfr_cmp_d(tol.get(), 1e-30) < 0) mpfr_set_d(tol.get(), 1e-30, MPFR_RNDN);
    mpfr_mul_2si(tol.get(), tol.get(), -(static_cast<long>(bits) - 16), MPFR_RNDN);
    mpfr_sub(width.get(), hi.get(), lo.get(), MPFR_RNDN);
    if (mpfr_cmp(width.get(), tol.get()) <= 0) return x;
    bool newton = !mpfr_zero_p(ratio.get()) && mpfr_number_p(ratio.get());
    if (newton) {
      mpfr_si_div(step.get(), -1, ratio.get(), MPFR_RNDN);
      if (mpfr_cmpabs(step.get(), tol.get()) <= 0) return x;
      mpfr_add(xn.get(), x.get(), step.get(), MPFR_RNDN);
      mpfr_abs(half.get(), dx_old.get(), MPFR_RNDN);
      mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDN);
      newton = within(xn, lo, hi) && mpfr_cmpabs(step.get(), half.get()) <= 0;
    }
    if (!newton) {
      mpfr_add(xn.get(), lo.get(), hi.get(), MPFR_RNDN);
      mpfr_div_2ui(xn.get(), xn.get(), 1, MPFR_RNDN);
      mpfr_sub(step.get(), xn.get(), x.get(), MPFR_RNDN);
    }
    mpfr_set(dx_old.get(), step.get(), MPFR_RNDN);
    mpfr_swap(x.get(), xn.get());
  }
  throw PrecisionExhausted{};
}

struct MpBracket {
  Mp lo, hi;
  int clo, chi;
  int defer = 0;  // bisections to do before the next pair-splitting attempt
};

// Two roots in (lo, hi): locate the extremum c of f between them, where f is
// close to a quadratic, and start Newton from c -/+ sqrt(-2 / (ln f)''(c)).
bool split_pair(MpSturm& S, const MpBracket& br, const Mp& floor_width, std::vector<Mp>& out) {
  const mpfr_prec_t bits = S.bits();
  Mp lo(br.lo), hi(br.hi), x(bits), xn(bits), logf(bits), g(bits), gp(bits), step(bits), r(bits);
  Mp ilo(bits), ihi(bits), tol(bits);
  mpfr_add(x.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
  bool inside = false, found = false;
  int outside = 0;
  for (int it = 0; it < 60; ++it) {
    const int c = S.eval_full(x, logf, g, gp);
    if (!(gp.sign() < 0) || !mpfr_number_p(g.get())) return false;
    mpfr_div(step.get(), g.get(), gp.get(), MPFR_RNDN);
    if (c == br.clo + 1) {
      if (!inside) {
        inside = true;
        mpfr_set(ilo.get(), lo.get(), MPFR_RNDN);
        mpfr_set(ihi.get(), hi.get(), MPFR_RNDN);
      }
      if (g.sign() > 0)
        mpfr_set(ilo.get(), x.get(), MPFR_RNDN);
      else
        mpfr_set(ihi.get(), x.get(), MPFR_RNDN);
      mpfr_sub(xn.get(), x.get(), step.get(), MPFR_RNDN);
      // half-width of the pair from the local quadratic
      mpfr_si_div(r.get(), -2, gp.get(), MPFR_RNDN);
      mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
      if (mpfr_cmp(r.get(), floor_width.get()) <= 0) throw PrecisionExhausted{};
      mpfr_mul_2si(tol.get(), r.get(), -40, MPFR_RNDN);
      if (mpfr_cmpabs(step.get(), tol.get()) <= 0) {
        found = true;
        break;
      }
      if (!within(xn, ilo, ihi)) {
        mpfr_add(xn.get(), ilo.get(), ihi.get(), MPFR_RNDN);
        mpfr_div_2ui(xn.get(), xn.get(), 1, MPFR_RNDN);
      }
    } else {
      // for a close pair one jump from outside lands between the roots; repeated
      // outside steps mean the roots are far apart and bisection is the better tool
      if (++outside > 3) return false;
      if (c <= br.clo)
        mpfr_set(lo.get(), x.get(), MPFR_RNDN);
      else
        mpfr_set(hi.get(), x.get(), MPFR_RNDN);
      // Newton on 1/(ln f)', which is nearly linear away from the pair
      if (mpfr_cmpabs(step.get(), floor_width.get()) <= 0) throw PrecisionExhausted{};
      mpfr_add(xn.get(), x.get(), step.get(), MPFR_RNDN);
      if (!within(xn, lo, hi)) {
        mpfr_add(xn.get(), lo.get(), hi.get(), MPFR_RNDN);
        mpfr_div_2ui(xn.get(), xn.get(), 1, MPFR_RNDN);
      }
    }
    mpfr_swap(x.get(), xn.get());
  }
  if (!found) return false;
  if (mpfr_cmp(r.get(), floor_width.get()) <= 0) throw PrecisionExhausted{};
  Mp seed(bits);
  mpfr_sub(seed.get(), x.get(), r.get(), MPFR_RNDN);
  out.push_back(polish(S, br.lo, x, br.clo, seed));
  mpfr_add(seed.get(), x.get(), r.get(), MPFR_RNDN);
  out.push_back(polish(S, x, br.hi, br.clo + 1, seed));
  return true;
}

std::vector<Mp> isolate(MpSturm& S, const Mp& lo, const Mp& hi, int clo, int chi, int digits,
                        const std::vector<double>& seeds) {
  const mpfr_prec_t bits = S.bits();
  Mp floor_width(bits);
  mpfr_set_d(floor_width.get(), 10.0, MPFR_RNDN);
  mpfr_pow_si(floor_width.get(), floor_width.get(), -(digits - 10), MPFR_RNDN);
  std::vector<Mp> out;
  std::vector<MpBracket> stack;
  stack.push_back({lo, hi, clo, chi});
  Mp width(bits), mid(bits);
  while (!stack.empty()) {
    MpBracket b = std::move(stack.back());
    stack.pop_back();
    const int m = b.chi - b.clo;
    if (m <= 0) continue;
    if (m == 1) {
      out.push_back(polish(S, b.lo, b.hi, b.clo, Mp(bits, seeds[static_cast<std::size_t>(b.clo)])));
      continue;
    }
    int defer = b.defer > 0 ? b.defer - 1 : 0;
    if (m == 2 && b.defer == 0) {
      if (split_pair(S, b, floor_width, out)) continue;
      defer = 6;
    }
    mpfr_sub(width.get(), b.hi.get(), b.lo.get(), MPFR_RNDN);
    if (mpfr_cmp(width.get(), floor_width.get()) <= 0) throw PrecisionExhausted{};
    mpfr_add(mid.get(), b.lo.get(), b.hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    const int c = S.count(mid);
    stack.push_back({mid, b.hi, c, b.chi, defer});
    stack.push_back({b.lo, mid, b.clo, c, defer});
  }
  std::sort(out.begin(), out.end(), [](const Mp& a, const Mp& b) { return mpfr_less_p(a.get(), b.get()); });
  return out;
}

struct GapSolve {
  bool ok = false;
  int needed_digits = 0;
  GapOverride out;
};

// Edges of the gap between the adjacent centers a < b: find the maximum c of
// ln|f| on (a, b), then the two solutions of ln|f| = ln 4 on either side of it.
GapSolve solve_gap(MpSturm& S, const Mp& a_in, const Mp& b_in, int digits) {
  const mpfr_prec_t bits = S.bits();
  Mp a(bits), b(bits);
  mpfr_set(a.get(), a_in.get(), MPFR_RNDN);
  mpfr_set(b.get(), b_in.get(), MPFR_RNDN);
  Mp lo(a), hi(b), x(bits), xn(bits), step(bits), logf(bits), g(bits), gp(bits), tol(bits), sep(bits), ln4(bits);
  mpfr_set_ui(ln4.get(), 4, MPFR_RNDN);
  mpfr_log(ln4.get(), ln4.get(), MPFR_RNDN);
  mpfr_sub(sep.get(), b.get(), a.get(), MPFR_RNDN);
  mpfr_mul_2si(tol.get(), sep.get(), -(static_cast<long>(bits) - 100), MPFR_RNDN);
  mpfr_add(x.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
  const long max_iter = 120;
  Mp hx(bits), crit(bits);
  // (ln f)' decreases strictly between consecutive roots
  for (long it = 0; it < max_iter; ++it) {
    S.eval_full(x, logf, g, gp);
    if (g.sign() > 0)
      mpfr_set(lo.get(), x.get(), MPFR_RNDN);
    else
      mpfr_set(hi.get(), x.get(), MPFR_RNDN);
    mpfr_div(step.get(), g.get(), gp.get(), MPFR_RNDN);
    mpfr_neg(step.get(), step.get(), MPFR_RNDN);
    mpfr_add(xn.get(), x.get(), step.get(), MPFR_RNDN);
    if (!mpfr_number_p(xn.get()) || !within(xn, lo, hi)) {
      mpfr_add(xn.get(), lo.get(), hi.get(), MPFR_RNDN);
      mpfr_div_2ui(xn.get(), xn.get(), 1, MPFR_RNDN);
      mpfr_sub(step.get(), xn.get(), x.get(), MPFR_RNDN);
    }
    mpfr_swap(x.get(), xn.get());
    if (mpfr_cmpabs(step.get(), tol.get()) <= 0) break;
    // ln|f| is flat at its maximum: stop once the remaining error in it is negligible
    mpfr_sub(hx.get(), logf.get(), ln4.get(), MPFR_RNDN);
    mpfr_sqr(crit.get(), step.get(), MPFR_RNDN);
    mpfr_mul(crit.get(), crit.get(), gp.get(), MPFR_RNDN);
    mpfr_mul_2si(hx.get(), hx.get(), -80, MPFR_RNDN);
    if (mpfr_cmpabs(crit.get(), hx.get()) <= 0) break;
  }
  Mp c(x), hc(bits), hpp(bits);
  S.eval_full(c, logf, g, hpp);
  mpfr_sub(hc.get(), logf.get(), ln4.get(), MPFR_RNDN);

  GapSolve res;
  // evaluation error of ln|f| near c is about 10^-digits / (distance to the nearest root)
  const double hc_d = hc.to_double();
  const double sep_d = sep.to_double();
  const int needed = static_cast<int>(std::ceil(-std::log10(std::max(hc_d, 1e-300)) - std::log10(sep_d))) + 25;
  res.needed_digits = needed;
  if (!(hc_d > 0.0) || needed > digits) return res;

  // quadratic model for the distance from c to either edge
  Mp u(bits);
  mpfr_div(u.get(), hc.get(), hpp.get(), MPFR_RNDN);
  mpfr_mul_si(u.get(), u.get(), -2, MPFR_RNDN);
  mpfr_sqrt(u.get(), u.get(), MPFR_RNDN);
  mpfr_mul_2si(tol.get(), u.get(), -100, MPFR_RNDN);

  auto edge = [&](int side, Mp& root) {
    // start where ln|f| < ln 4, then Newton moves monotonically toward c
    Mp off(u), h(bits);
    for (int k = 0; k < 4000; ++k) {
      mpfr_mul_2ui(off.get(), off.get(), 1, MPFR_RNDN);
      if (side < 0) {
        mpfr_sub(x.get(), c.get(), off.get(), MPFR_RNDN);
        if (!mpfr_greater_p(x.get(), a.get())) {
          mpfr_add(x.get(), a.get(), c.get(), MPFR_RNDN);
          mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
        }
      } else {
        mpfr_add(x.get(), c.get(), off.get(), MPFR_RNDN);
        if (!mpfr_less_p(x.get(), b.get())) {
          mpfr_add(x.get(), b.get(), c.get(), MPFR_RNDN);
          mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
        }
      }
      S.eval_full(x, logf, g, gp);
      mpfr_sub(h.get(), logf.get(), ln4.get(), MPFR_RNDN);
      if (h.sign() < 0) break;
      mpfr_set(c.get(), x.get(), MPFR_RNDN);
    }
    if (h.sign() >= 0) return false;
    for (int it = 0; it < 200; ++it) {
      mpfr_div(step.get(), h.get(), g.get(), MPFR_RNDN);
      mpfr_neg(step.get(), step.get(), MPFR_RNDN);
      mpfr_add(x.get(), x.get(), step.get(), MPFR_RNDN);
      if (mpfr_cmpabs(step.get(), tol.get()) <= 0) break;
      S.eval_full(x, logf, g, gp);
      mpfr_sub(h.get(), logf.get(), ln4.get(), MPFR_RNDN);
      if (h.sign() >= 0) break;
    }
    mpfr_set(root.get(), x.get(), MPFR_RNDN);
    return true;
  };
  Mp c_saved(c), left(bits), right(bits);
  if (!edge(-1, left)) return res;
  mpfr_set(c.get(), c_saved.get(), MPFR_RNDN);
  if (!edge(+1, right)) return res;

  Mp t(bits);
  mpfr_sub(t.get(), right.get(), left.get(), MPFR_RNDN);
  res.out.delta = t.to_double();
  mpfr_sub(t.get(), left.get(), a.get(), MPFR_RNDN);
  res.out.w_right = t.to_double();
  mpfr_sub(t.get(), b.get(), right.get(), MPFR_RNDN);
  res.out.w_left = t.to_double();
  res.ok = res.out.delta > 0.0 && res.out.w_right > 0.0 && res.out.w_left > 0.0;
  return res;
}

}  // namespace

struct MpRefiner::Impl {
  std::int64_t p, q;
  std::size_t n, s;
  int max_digits;
  int used_digits = 0;
  mpfr_prec_t widest = 53;
  std::vector<Mp> half;  // centers with full index >= s
  std::map<int, std::unique_ptr<MpSturm>> sturm;

  MpSturm& at(int digits) {
    auto& S = sturm[digits];
    if (!S) S = std::make_unique<MpSturm>(p, q, digits_to_bits(digits));
    return *S;
  }
};

MpRefiner::MpRefiner(std::int64_t p, std::int64_t q) : impl_(std::make_unique<Impl>()) {
  impl_->p = p;
  impl_->q = q;
  impl_->n = static_cast<std::size_t>(q);
  impl_->s = (impl_->n - 1) / 2;
  impl_->max_digits = static_cast<int>(std::ceil(static_cast<double>(q) * std::log10(8.0))) + 60;
}

MpRefiner::~MpRefiner() = default;

int MpRefiner::max_digits() const { return impl_->used_digits; }

RefinedCenters MpRefiner::refine(const std::vector<double>& lambda, const std::vector<std::size_t>& targets) {
  Impl& m = *impl_;
  const std::size_t n = m.n, s = m.s;
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t t : targets) {
    if (t <= s || t >= n) continue;
    if (!runs.empty() && runs.back().second + 1 == t)
      runs.back().second = t;
    else
      runs.push_back({t, t});
  }

  std::vector<std::vector<Mp>> refined(runs.size());
  std::vector<std::pair<std::size_t, std::size_t>> final_runs(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::size_t i0 = runs[r].first, i1 = runs[r].second;
    int digits = 40;
    for (int attempt = 0;; ++attempt) {
      if (digits > m.max_digits) throw std::runtime_error("cluster of band centers unresolved at the maximum precision");
      const mpfr_prec_t bits = digits_to_bits(digits);
      MpSturm& S = m.at(digits);
      const bool whole = attempt >= 8;
      Mp lo(bits), hi(bits);
      if (whole) {
        i0 = s + 1;
        i1 = n - 1;
        mpfr_set_d(lo.get(), 0.5 * lambda[s + 1], MPFR_RNDN);
        mpfr_set_d(hi.get(), 7.0, MPFR_RNDN);
      } else {
        mpfr_set_d(lo.get(), lambda[i0] - 0.5 * (lambda[i0] - lambda[i0 - 1]), MPFR_RNDN);
        mpfr_set_d(hi.get(), i1 + 1 < n ? lambda[i1] + 0.5 * (lambda[i1 + 1] - lambda[i1]) : lambda[i1] + 1e-3,
                   MPFR_RNDN);
      }
      const int clo = S.count(lo), chi = S.count(hi);
      if (!whole && (clo != static_cast<int>(i0) || chi != static_cast<int>(i1) + 1)) {
        if (clo != static_cast<int>(i0) && i0 > s + 1) --i0;
        if (chi != static_cast<int>(i1) + 1 && i1 + 1 < n) ++i1;
        continue;
      }
      std::vector<Mp> vals;
      try {
        vals = isolate(S, lo, hi, clo, chi, digits, lambda);
      } catch (const PrecisionExhausted&) {
        digits = digits >= m.max_digits ? digits + 1 : std::min(2 * digits, m.max_digits);
        continue;
      }
      // the closest pair found must sit well above the working precision
      double worst_digits = 0.0;
      Mp diff(bits);
      for (std::size_t k = 1; k < vals.size(); ++k) {
        mpfr_sub(diff.get(), vals[k].get(), vals[k - 1].get(), MPFR_RNDN);
        const double d = diff.to_double();
        worst_digits = std::max(worst_digits, d > 0.0 ? -std::log10(d) : 2.0 * digits);
      }
      if (worst_digits + 25.0 > digits) {
        digits = std::min(static_cast<int>(std::ceil(worst_digits)) + 30, std::max(digits + 1, m.max_digits));
        continue;
      }
      refined[r] = std::move(vals);
      final_runs[r] = {i0, i1};
      m.used_digits = std::max(m.used_digits, digits);
      m.widest = std::max(m.widest, bits);
      break;
    }
  }

  m.half.clear();
  m.half.reserve(n - s);
  for (std::size_t i = s; i < n; ++i) m.half.emplace_back(m.widest, lambda[i]);
  mpfr_set_zero(m.half[0].get(), 1);
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (std::size_t k = 0; k < refined[r].size(); ++k)
      mpfr_set(m.half[final_runs[r].first + k - s].get(), refined[r][k].get(), MPFR_RNDN);

  RefinedCenters rc;
  rc.max_digits = m.used_digits;
  rc.lambda.assign(n, 0.0);
  for (std::size_t i = s; i < n; ++i) {
    const double v = m.half[i - s].to_double();
    rc.lambda[i] = v;
    rc.lambda[2 * s - i] = -v;
  }
  // lambda_k for k < s is -lambda_{2s-k}
  Mp d(m.widest);
  rc.diff.assign(s + 1, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j <= s; ++j) {
    const Mp& lj = m.half[j];
    for (std::size_t k = 0; k < n; ++k) {
      if (k >= s)
        mpfr_sub(d.get(), lj.get(), m.half[k - s].get(), MPFR_RNDN);
      else
        mpfr_add(d.get(), lj.get(), m.half[2 * s - k - s].get(), MPFR_RNDN);
      rc.diff[j][k] = d.to_double();
    }
  }
  return rc;
}

std::vector<GapOverride> MpRefiner::solve_gaps(const std::vector<std::size_t>& gaps) {
  Impl& m = *impl_;
  if (m.half.size() != m.n - m.s) throw std::logic_error("solve_gaps called before refine");
  // the gap scales like the square of the separation, so its precision cap is larger
  const int gap_max_digits = 3 * m.max_digits + 30;
  std::vector<GapOverride> out;
  for (std::size_t i : gaps) {
    if (i < m.s || i + 1 >= m.n) continue;
    const Mp& a = m.half[i - m.s];
    const Mp& b = m.half[i + 1 - m.s];
    Mp sep(m.widest);
    mpfr_sub(sep.get(), b.get(), a.get(), MPFR_RNDN);
    int digits = std::max(40, static_cast<int>(std::ceil(-3.0 * std::log10(sep.to_double()))) + 30);
    digits = std::min(digits, gap_max_digits);
    for (;;) {
      GapSolve g = solve_gap(m.at(digits), a, b, digits);
      if (g.ok) {
        g.out.i = i;
        out.push_back(g.out);
        m.used_digits = std::max(m.used_digits, digits);
        break;
      }
      if (digits >= gap_max_digits)
        throw std::runtime_error("gap between nearly coincident bands unresolved at the maximum precision");
      digits = std::min(std::max(2 * digits, g.needed_digits + 10), gap_max_digits);
    }
  }
  return out;
}

}  // namespace amo::detail
