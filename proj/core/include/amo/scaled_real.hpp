#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace amo {

// sign * exp(log_mag); log_mag is meaningless when sign == 0.
struct ScaledReal {
  int sign = 0;
  double log_mag = -std::numeric_limits<double>::infinity();

  static ScaledReal zero() { return {}; }
  static ScaledReal from_double(double x);
  static ScaledReal from_log(int sign, double log_mag);

  bool is_zero() const { return sign == 0; }
  // True when the value is a finite, normal double.
  bool representable() const;
  double to_double() const;
  double log10_abs() const;
  ScaledReal abs() const { return sign == 0 ? ScaledReal{} : ScaledReal{1, log_mag}; }

  ScaledReal operator-() const { return {-sign, log_mag}; }
  friend ScaledReal operator*(const ScaledReal& a, const ScaledReal& b);
  friend ScaledReal operator/(const ScaledReal& a, const ScaledReal& b);
  friend ScaledReal operator+(const ScaledReal& a, const ScaledReal& b);
  friend ScaledReal operator-(const ScaledReal& a, const ScaledReal& b) { return a + (-b); }
};

// -1, 0, +1 comparing |a| with |b|.
int compare_abs(const ScaledReal& a, const ScaledReal& b);

// Running product kept as mantissa * 2^exponent so that long products of
// doubles neither overflow nor underflow.
class ScaledProduct {
 public:
  void mul(double x) {
    mant_ *= x;
    if (!(std::fabs(mant_) < 0x1p+400) || std::fabs(mant_) < 0x1p-400) renormalize();
  }
  void mul(const ScaledProduct& o) {
    mant_ *= o.mant_;
    exp_ += o.exp_;
    renormalize();
  }
  double log_abs() const;
  int sign() const { return mant_ > 0 ? 1 : (mant_ < 0 ? -1 : 0); }
  ScaledReal value() const;

 private:
  void renormalize();
  double mant_ = 1.0;
  std::int64_t exp_ = 0;
};

}  // namespace amo
