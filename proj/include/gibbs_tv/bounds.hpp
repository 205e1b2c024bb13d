#pragma once

#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/model.hpp"

#include <cstdint>

#include <json.hpp>

namespace gibbs_tv {

/// Every quantity entering the total-variation mixing bound.
///
/// Probabilities and rates that would over- or underflow are also kept in
/// log space (log_omega, log_exp_factor). Vacuous values are reported as
/// computed, never clamped.
struct BoundReport {
  double epsilon = 0.0;
  double theta_wasserstein = 0.0; ///< Wasserstein mixing time at omega^2
  std::uint64_t tau = 0;          ///< ceil(theta_wasserstein)
  std::uint64_t M = 0;
  double epsilon_tilde = 0.0;
  double omega = 0.0;
  double log_omega = 0.0;
  double log_exp_factor = 0.0; ///< (zeta + 1)^2 / (2 sigma_tilde^2)
  double zeta = 0.0;
  double zeta_safe = 0.0;
  double sigma_tilde = 0.0;
  double total_time = 0.0; ///< theta_wasserstein + M
  bool zeta_safe_warning = false;
  bool decoupled = false; ///< n_max = 0: the Wasserstein phase is empty

  std::uint64_t schedule_length() const { return tau + M; }
};

/// log(eps / (n_max N)) / log(1 - 1/(N (1 + n_max gamma^2 sigma^2))), using the
/// corrected (N-1)/N form of the denominator. Returns 0 once eps >= n_max N.
double wasserstein_mixing_time(std::size_t num_sites, std::size_t n_max, double gamma,
                               double sigma, double eps);

/// Same as above with eps supplied as its natural logarithm.
double wasserstein_mixing_time_log(std::size_t num_sites, std::size_t n_max, double gamma,
                                   double sigma, double log_eps);

/// Per-step contraction factor 1 - 1/(N (1 + n_max gamma^2 sigma^2)).
double wasserstein_contraction_rate(std::size_t num_sites, std::size_t n_max, double gamma,
                                    double sigma);

/// ceil(N ln N + N ln(2/eps)), at least 1.
std::uint64_t coupon_collector_M(std::size_t num_sites, double eps);

BoundReport tv_mixing_time(const ModelParams& params, const NeighborhoodGraph& graph,
                           double eps);

struct NormalTv {
  double exact = 0.0; ///< 2 Phi(|mu1 - mu2| / (2 sigma)) - 1
  double bound = 0.0; ///< |mu1 - mu2| / sqrt(2 pi sigma^2)
};

/// Total variation between Normal(mu1, sigma^2) and Normal(mu2, sigma^2).
NormalTv normal_tv(double mu1, double mu2, double sigma);

/// TV of the conditioned laws is at most tv_untruncated / min(mass1, mass2).
double truncated_tv_bound(double tv_untruncated, double mass1, double mass2);

struct MassLowerBound {
  double mass = 0.0;
  double lower_bound = 0.0;
};

/// Mass of Normal(zeta_i, sigma_sq) on [0,1] and the lower bound
/// (2 pi sigma_sq)^{-1/2} exp(-(|zeta_i| + 1)^2 / (2 sigma_sq)).
MassLowerBound truncated_mass_lower_bound(double zeta_i, double sigma_sq);

/// exp((|zeta_i| + 1)^2 / (2 sigma_sq_i)) sigma_sq_i gamma^2 neighbor_l1_diff.
/// Bounds the probability that one maximal-coupling update fails to meet;
/// values above 1 are returned as is.
double per_site_noncoalescence_bound(double zeta_i, double sigma_sq_i, double gamma,
                                     double neighbor_l1_diff);

nlohmann::json to_json(const BoundReport& report);

} // namespace gibbs_tv
