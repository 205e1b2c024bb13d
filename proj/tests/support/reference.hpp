#pragma once

// Reference values and closed forms used only by the tests. The formulas are
// written out directly from std::erfc and friends so they share no code with
// the library.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ref {

// Golden values for the 2x2 four-neighbour grid, gamma = sigma = 1, y = 0.5,
// epsilon = 0.1, computed with 50-digit arithmetic.
inline constexpr double kThetaW01 = 50.3615364597;
inline constexpr std::uint64_t kM = 18;
inline constexpr double kEpsTilde = 0.00284557113;
inline constexpr double kZeta = 0.8333333333333333;
inline constexpr double kSigmaTildeSq = 1.0 / 3.0;
inline constexpr double kExpFactor = 154.7276797;
inline constexpr double kOmega = 1.82727383e-5;
inline constexpr double kThetaOmegaSq = 274.6726119;
inline constexpr double kTotalTime = 292.6726119;
inline constexpr double kCouponTailN4M18 = 0.02252795233;
inline constexpr double kMedianExample = 0.6015195938; // mean 0.833333, variance 1/3
inline constexpr double kMassExample = 0.5391276671;
inline constexpr double kMassLowerExample = 0.004465835074;
inline constexpr double kNormalTvExact = 0.07965567455; // mu 0 vs 0.2, sigma 1
inline constexpr double kNormalTvBound = 0.07978845608;
inline constexpr double kPerSiteExample = 5.157589324;

inline double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Mean of Normal(m, v) restricted to [0,1].
inline double truncated_mean(double m, double v) {
  const double s = std::sqrt(v);
  const double a = (0.0 - m) / s;
  const double b = (1.0 - m) / s;
  return m + s * (phi(a) - phi(b)) / (Phi(b) - Phi(a));
}

/// CDF of Normal(m, v) restricted to [0,1], for moderate truncation.
inline double truncated_cdf(double m, double v, double x) {
  const double s = std::sqrt(v);
  const double lo = Phi(-m / s);
  return (Phi((x - m) / s) - lo) / (Phi((1.0 - m) / s) - lo);
}

} // namespace ref
