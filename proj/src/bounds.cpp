#include "gibbs_tv/bounds.hpp"

#include "gibbs_tv/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gibbs_tv {

namespace {

// log(1 + e^a) without overflow.
double log1p_exp(double a) {
  return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

void require_sites(std::size_t num_sites) {
  if (num_sites == 0) {
    throw std::invalid_argument("number of sites must be positive");
  }
}

} // namespace

double wasserstein_contraction_rate(std::size_t num_sites, std::size_t n_max, double gamma,
                                    double sigma) {
  require_sites(num_sites);
  const double n = static_cast<double>(num_sites);
  return 1.0 - 1.0 / (n * (1.0 + static_cast<double>(n_max) * gamma * gamma * sigma * sigma));
}

double wasserstein_mixing_time_log(std::size_t num_sites, std::size_t n_max, double gamma,
                                   double sigma, double log_eps) {
  require_sites(num_sites);
  if (n_max == 0) {
    throw std::invalid_argument(
        "Wasserstein mixing time needs n_max >= 1; with no neighbours the weighted metric "
        "is identically zero (decoupled model)");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  const double n = static_cast<double>(num_sites);
  const double numerator = log_eps - std::log(static_cast<double>(n_max) * n);
  if (numerator >= 0.0) {
    return 0.0;
  }
  const double denominator = std::log1p(
      -1.0 / (n * (1.0 + static_cast<double>(n_max) * gamma * gamma * sigma * sigma)));
  if (denominator == 0.0) {
    // Contraction indistinguishable from 1 in double precision.
    return std::numeric_limits<double>::infinity();
  }
  return numerator / denominator;
}

double wasserstein_mixing_time(std::size_t num_sites, std::size_t n_max, double gamma,
                               double sigma, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  return wasserstein_mixing_time_log(num_sites, n_max, gamma, sigma, std::log(eps));
}

std::uint64_t coupon_collector_M(std::size_t num_sites, double eps) {
  require_sites(num_sites);
  if (!(eps > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (eps >= 2.0) {
    throw std::invalid_argument("epsilon must be below 2 for the coupon-collector cutoff");
  }
  const double n = static_cast<double>(num_sites);
  const double m = std::ceil(n * std::log(n) + n * std::log(2.0 / eps));
  return m < 1.0 ? 1 : static_cast<std::uint64_t>(m);
}

BoundReport tv_mixing_time(const ModelParams& params, const NeighborhoodGraph& graph,
                           double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  const auto constants = thermo_constants(params, graph);
  const std::size_t n = graph.num_sites();

  BoundReport r;
  r.epsilon = eps;
  r.M = coupon_collector_M(n, eps);
  // 1 - (1 - eps/2)^(1/M)
  r.epsilon_tilde = -std::expm1(std::log1p(-eps / 2.0) / static_cast<double>(r.M));
  r.zeta = constants.zeta;
  r.zeta_safe = constants.zeta_safe;
  r.zeta_safe_warning = constants.zeta_safe > constants.zeta;
  r.sigma_tilde = constants.sigma_tilde;
  r.log_exp_factor = (r.zeta + 1.0) * (r.zeta + 1.0) /
                     (2.0 * r.sigma_tilde * r.sigma_tilde);
  r.log_omega = std::log(r.epsilon_tilde) - log1p_exp(r.log_exp_factor);
  r.omega = std::exp(r.log_omega);

  if (graph.n_max() == 0) {
    r.decoupled = true;
    r.theta_wasserstein = 0.0;
  } else {
    r.theta_wasserstein = wasserstein_mixing_time_log(n, graph.n_max(), params.gamma,
                                                      params.sigma, 2.0 * r.log_omega);
  }
  if (!std::isfinite(r.theta_wasserstein) ||
      r.theta_wasserstein >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    r.tau = std::numeric_limits<std::uint64_t>::max() / 2;
  } else {
    r.tau = static_cast<std::uint64_t>(std::ceil(r.theta_wasserstein));
  }
  r.total_time = r.theta_wasserstein + static_cast<double>(r.M);
  return r;
}

NormalTv normal_tv(double mu1, double mu2, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("normal_tv: sigma must be positive");
  }
  const double delta = std::abs(mu1 - mu2);
  // 2 Phi(d) - 1 = erf(d / sqrt 2)
  const double exact = std::erf(delta / (2.0 * sigma) / std::numbers::sqrt2);
  const double bound = delta / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
  return {exact, bound};
}

double truncated_tv_bound(double tv_untruncated, double mass1, double mass2) {
  if (!(mass1 > 0.0) || !(mass2 > 0.0)) {
    throw std::invalid_argument("truncated_tv_bound: masses must be positive");
  }
  return tv_untruncated / std::min(mass1, mass2);
}

MassLowerBound truncated_mass_lower_bound(double zeta_i, double sigma_sq) {
  if (!(sigma_sq > 0.0)) {
    throw std::invalid_argument("truncated_mass_lower_bound: variance must be positive");
  }
  const TruncatedNormal tn(zeta_i, sigma_sq);
  const double a = std::abs(zeta_i) + 1.0;
  const double lower =
      std::exp(-a * a / (2.0 * sigma_sq)) / std::sqrt(2.0 * std::numbers::pi * sigma_sq);
  return {tn.mass(), lower};
}

double per_site_noncoalescence_bound(double zeta_i, double sigma_sq_i, double gamma,
                                     double neighbor_l1_diff) {
  if (neighbor_l1_diff == 0.0 || gamma == 0.0) {
    return 0.0;
  }
  const double a = std::abs(zeta_i) + 1.0;
  const double log_bound = a * a / (2.0 * sigma_sq_i) + std::log(sigma_sq_i) +
                           2.0 * std::log(gamma) + std::log(neighbor_l1_diff);
  return std::exp(log_bound);
}

nlohmann::json to_json(const BoundReport& r) {
  return {
      {"epsilon", r.epsilon},
      {"theta_wasserstein", r.theta_wasserstein},
      {"tau", r.tau},
      {"M", r.M},
      {"schedule_length", r.schedule_length()},
      {"epsilon_tilde", r.epsilon_tilde},
      {"omega", r.omega},
      {"log_omega", r.log_omega},
      {"log_exp_factor", r.log_exp_factor},
      {"zeta", r.zeta},
      {"zeta_safe", r.zeta_safe},
      {"zeta_safe_warning", r.zeta_safe_warning},
      {"sigma_tilde", r.sigma_tilde},
      {"sigma_tilde_sq", r.sigma_tilde * r.sigma_tilde},
      {"total_time", r.total_time},
      {"decoupled", r.decoupled},
  };
}

} // namespace gibbs_tv
