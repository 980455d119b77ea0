#include "amo/scaled_real.hpp"

#include <algorithm>

namespace amo {

namespace {
constexpr double kLn10 = 2.302585092994045684;
constexpr double kLn2 = 0.693147180559945309;
}  // namespace

ScaledReal ScaledReal::from_double(double x) {
  if (x == 0.0) return {};
  return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
}

ScaledReal ScaledReal::from_log(int sign, double log_mag) {
  if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) return {};
  return {sign > 0 ? 1 : -1, log_mag};
}

bool ScaledReal::representable() const {
  if (sign == 0) return true;
  return log_mag < 709.78 && log_mag > -708.39;
}

double ScaledReal::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_mag);
}

double ScaledReal::log10_abs() const {
  if (sign == 0) return -std::numeric_limits<double>::infinity();
  return log_mag / kLn10;
}

ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.log_mag + b.log_mag};
}

ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
  if (b.sign == 0) return {a.sign, std::numeric_limits<double>::infinity()};
  if (a.sign == 0) return {};
  return {a.sign * b.sign, a.log_mag - b.log_mag};
}

ScaledReal operator+(const ScaledReal& a, const ScaledReal& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const ScaledReal& big = a.log_mag >= b.log_mag ? a : b;
  const ScaledReal& small = a.log_mag >= b.log_mag ? b : a;
  double r = std::exp(small.log_mag - big.log_mag);
  if (big.sign == small.sign) return {big.sign, big.log_mag + std::log1p(r)};
  if (r == 1.0) return {};
  return {big.sign, big.log_mag + std::log1p(-r)};
}

int compare_abs(const ScaledReal& a, const ScaledReal& b) {
  if (a.sign == 0 && b.sign == 0) return 0;
  if (a.sign == 0) return -1;
  if (b.sign == 0) return 1;
  if (a.log_mag < b.log_mag) return -1;
  if (a.log_mag > b.log_mag) return 1;
  return 0;
}

void ScaledProduct::renormalize() {
  if (mant_ == 0.0 || !std::isfinite(mant_)) return;
  int e = 0;
  mant_ = std::frexp(mant_, &e);
  exp_ += e;
}

double ScaledProduct::log_abs() const {
  if (mant_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::fabs(mant_)) + static_cast<double>(exp_) * kLn2;
}

ScaledReal ScaledProduct::value() const { return ScaledReal::from_log(sign(), log_abs()); }

}  // namespace amo
