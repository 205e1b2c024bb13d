#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gibbs_tv {

struct ProportionInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width() const { return 0.5 * (upper - lower); }
};

/// Two-sided Wilson score interval at the given confidence level.
ProportionInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                   double confidence = 0.95);

/// Standard error of a proportion, sqrt(p (1 - p) / n).
double binomial_standard_error(double p, std::uint64_t trials);

struct KsResult {
  double statistic = 0.0; ///< sup |F_n - F|
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov test; the sample is copied and sorted.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov survival function P[K > lambda].
double kolmogorov_survival(double lambda);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
};

/// Pearson goodness of fit of observed counts against expected probabilities.
/// Cells with expected count below `min_expected` are pooled into one cell.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> probabilities,
                                double min_expected = 5.0);

/// Upper-tail probability of a chi-square variate.
double chi_square_survival(double statistic, double dof);

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanAndError mean_and_error(std::span<const double> values);

} // namespace gibbs_tv
