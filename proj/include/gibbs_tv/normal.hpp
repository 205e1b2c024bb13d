#pragma once

#include <cmath>
#include <numbers>

namespace gibbs_tv {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

/// Standard normal density.
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

inline double normal_log_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

/// Standard normal CDF, evaluated through erfc so that both tails keep full
/// relative precision.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

/// Upper tail Q(z) = 1 - Phi(z).
inline double normal_upper_tail(double z) { return normal_cdf(-z); }

/// log Q(z) for any finite z, including arguments where Q underflows.
double log_normal_upper_tail(double z);

/// Inverse standard normal CDF on (0,1).
/// Rational initial guess followed by a Halley correction against the
/// erfc-based CDF; absolute error is below 1e-12 on (1e-15, 1 - 1e-15).
double normal_quantile(double p);

/// Solves log Q(z) = log_tail for z. Works far beyond the range where
/// exp(log_tail) is representable.
double inverse_log_normal_upper_tail(double log_tail);

/// Normal(mean, variance) restricted to [0,1].
///
/// Internally the interval is standardized and, if needed, reflected so that
/// it sits on the upper side of the mean. All masses are kept in log space
/// and differences of tail probabilities go through expm1, which keeps the
/// CDF and quantile accurate when both endpoints lie deep in one tail.
class TruncatedNormal {
public:
  TruncatedNormal(double mean, double variance);

  double mean() const { return mean_; }
  double variance() const { return sd_ * sd_; }
  double sd() const { return sd_; }

  double log_mass() const { return log_mass_; }
  double mass() const { return std::exp(log_mass_); }

  /// Log of the normalized density on [0,1]; -inf outside the support.
  double log_pdf(double x) const;
  double pdf(double x) const { return std::exp(log_pdf(x)); }

  double cdf(double x) const;

  /// Inverse CDF. Requires 0 < u < 1; the result lies in [0,1] and is
  /// nondecreasing in u.
  double quantile(double u) const;

private:
  double tail_cdf(double w) const;
  double tail_quantile(double u) const;

  double mean_;
  double sd_;
  bool reflected_;
  // Standardized, possibly reflected, support [lo_, hi_] with lo_ + hi_ >= 0.
  double lo_;
  double hi_;
  double log_q_lo_;
  double neg_expm1_span_; // 1 - Q(hi)/Q(lo)
  double log_mass_;
};

} // namespace gibbs_tv
