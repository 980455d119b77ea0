#pragma once

#include <cmath>
#include <numbers>

namespace amo::constants {

inline constexpr double gamma0 = std::numbers::egamma;
inline const double beta = 4.0 * (std::exp(-1.0) + std::asinh(4.0 / std::numbers::pi));
inline const double C0 = 1.0 + 2.0 * std::numbers::e / (std::sqrt(5.0) - 1.0);
inline constexpr double C1 = 14.0;
inline const double C2 = std::exp(10.0);
inline constexpr double C_ams = 60.0;
// 4^2 60^2 C2^4 and 2 C2^2; only their logs are safe to use at large powers.
inline const double log_C3 = std::log(16.0 * 3600.0) + 40.0;
inline const double log_C4 = std::log(2.0) + 20.0;

// Exponent gamma0 + 5 + beta/ln 2 of the sharpened central-width bound.
inline const double sharp_exponent = gamma0 + 5.0 + beta / std::numbers::ln2;
// log of (2/3) e^(9 + 4 gamma0/3).
inline const double log_sharp_prefactor = std::log(2.0 / 3.0) + 9.0 + 4.0 * gamma0 / 3.0;

}  // namespace amo::constants
