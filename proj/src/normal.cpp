#include "gibbs_tv/normal.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace gibbs_tv {

namespace {

// Acklam's rational approximation, relative error ~1.15e-9 before refinement.
constexpr std::array<double, 6> kA{-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB{-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
constexpr std::array<double, 6> kC{-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD{7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kPLow = 0.02425;

double acklam(double p) {
  if (p < kPLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p <= 1.0 - kPLow) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
           (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
         ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
}

// Lower-tail quantile for p <= 0.5, where p carries full relative precision.
double lower_quantile(double p) {
  double x = acklam(p);
  for (int k = 0; k < 2; ++k) {
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

} // namespace

double log_normal_upper_tail(double z) {
  if (z < -5.0) {
    return std::log1p(-normal_cdf(z));
  }
  if (z <= 35.0) {
    return std::log(normal_upper_tail(z));
  }
  // Asymptotic expansion of Mills' ratio; truncation error < 1e-14 for z > 35.
  const double r = 1.0 / (z * z);
  const double series =
      1.0 + r * (-1.0 + r * (3.0 + r * (-15.0 + r * (105.0 + r * (-945.0)))));
  return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  }
  if (p <= 0.5) {
    return lower_quantile(p);
  }
  return -lower_quantile(1.0 - p);
}

double inverse_log_normal_upper_tail(double log_tail) {
  if (!(log_tail < 0.0)) {
    throw std::domain_error("inverse_log_normal_upper_tail: log tail must be negative");
  }
  double z;
  if (log_tail >= std::log(0.5)) {
    // Q(z) >= 1/2, so Phi(z) = -expm1(log_tail) <= 1/2 is accurate.
    const double lower = -std::expm1(log_tail);
    if (lower <= 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
    z = lower_quantile(lower);
  } else if (log_tail > -700.0) {
    z = -lower_quantile(std::exp(log_tail));
  } else {
    z = std::sqrt(-2.0 * log_tail);
  }
  // Newton on log Q; slope is -phi(z)/Q(z).
  for (int k = 0; k < 6; ++k) {
    const double lq = log_normal_upper_tail(z);
    const double slope = -std::exp(normal_log_pdf(z) - lq);
    const double step = (lq - log_tail) / slope;
    z -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
      break;
    }
  }
  return z;
}

TruncatedNormal::TruncatedNormal(double mean, double variance) : mean_(mean) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::domain_error("TruncatedNormal: variance must be positive and finite");
  }
  if (!std::isfinite(mean)) {
    throw std::domain_error("TruncatedNormal: mean must be finite");
  }
  sd_ = std::sqrt(variance);
  const double a = (0.0 - mean) / sd_;
  const double b = (1.0 - mean) / sd_;
  reflected_ = a + b < 0.0;
  lo_ = reflected_ ? -b : a;
  hi_ = reflected_ ? -a : b;
  log_q_lo_ = log_normal_upper_tail(lo_);
  neg_expm1_span_ = -std::expm1(log_normal_upper_tail(hi_) - log_q_lo_);
  log_mass_ = log_q_lo_ + std::log(neg_expm1_span_);
}

double TruncatedNormal::log_pdf(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double z = (x - mean_) / sd_;
  return normal_log_pdf(z) - std::log(sd_) - log_mass_;
}

double TruncatedNormal::tail_cdf(double w) const {
  if (w <= lo_) {
    return 0.0;
  }
  if (w >= hi_) {
    return 1.0;
  }
  return -std::expm1(log_normal_upper_tail(w) - log_q_lo_) / neg_expm1_span_;
}

double TruncatedNormal::tail_quantile(double u) const {
  const double target = log_q_lo_ + std::log1p(-u * neg_expm1_span_);
  if (!(target < 0.0)) {
    return lo_;
  }
  return std::clamp(inverse_log_normal_upper_tail(target), lo_, hi_);
}

double TruncatedNormal::cdf(double x) const {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  const double z = (x - mean_) / sd_;
  return reflected_ ? 1.0 - tail_cdf(-z) : tail_cdf(z);
}

double TruncatedNormal::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("TruncatedNormal::quantile: u must lie in (0,1)");
  }
  const double x = reflected_ ? mean_ - sd_ * tail_quantile(1.0 - u)
                              : mean_ + sd_ * tail_quantile(u);
  return std::clamp(x, 0.0, 1.0);
}

} // namespace gibbs_tv
