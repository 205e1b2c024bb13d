#include "gibbs_tv/stats.hpp"

#include "gibbs_tv/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace gibbs_tv {

ProportionInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                   double confidence) {
  if (trials == 0) {
    throw std::invalid_argument("wilson_interval: no trials");
  }
  if (successes > trials) {
    throw std::invalid_argument("wilson_interval: more successes than trials");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("wilson_interval: confidence must lie in (0,1)");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double binomial_standard_error(double p, std::uint64_t trials) {
  if (trials == 0) {
    throw std::invalid_argument("binomial_standard_error: no trials");
  }
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double kolmogorov_survival(double lambda) {
  // The alternating series is useless near zero, where the survival is 1 to
  // double precision anyway.
  if (lambda < 0.2) {
    return 1.0;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) {
      break;
    }
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) {
    throw std::invalid_argument("ks_test: empty sample");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sqrt_n = std::sqrt(n);
  // Stephens' small-sample correction.
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return {d, kolmogorov_survival(lambda)};
}

double chi_square_survival(double statistic, double dof) {
  if (dof <= 0.0) {
    return 1.0;
  }
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> probabilities, double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_test: size mismatch");
  }
  std::uint64_t total = 0;
  for (const auto c : observed) {
    total += c;
  }
  const double n = static_cast<double>(total);
  double stat = 0.0;
  std::size_t cells = 0;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = n * probabilities[k];
    if (e < min_expected) {
      pooled_obs += static_cast<double>(observed[k]);
      pooled_exp += e;
      continue;
    }
    const double diff = static_cast<double>(observed[k]) - e;
    stat += diff * diff / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    const double diff = pooled_obs - pooled_exp;
    stat += diff * diff / pooled_exp;
    ++cells;
  }
  const double dof = cells > 1 ? static_cast<double>(cells - 1) : 0.0;
  return {stat, dof, chi_square_survival(stat, dof)};
}

MeanAndError mean_and_error(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("mean_and_error: no values");
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) {
    mean += v;
  }
  mean /= n;
  if (values.size() < 2) {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (const double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace gibbs_tv
