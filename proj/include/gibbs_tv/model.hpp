#pragma once

#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/normal.hpp"

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace gibbs_tv {

/// Smoothing strength gamma, noise level sigma and the observed image y.
struct ModelParams {
  double gamma = 0.0;
  double sigma = 1.0;
  std::vector<double> y;

  /// Throws unless sigma > 0, gamma >= 0 and y matches the graph size.
  void validate(const NeighborhoodGraph& graph) const;
};

/// Normal(mean, variance) restricted to [0,1] for one site.
struct FullConditional {
  SiteIndex site = 0;
  double mean = 0.0;
  double variance = 1.0;

  TruncatedNormal truncated() const { return {mean, variance}; }
};

struct ThermoConstants {
  std::vector<double> zeta_i;
  double zeta = 0.0;
  std::vector<double> sigma_tilde_sq_i;
  double sigma_tilde = 0.0;
  /// max_i max(|conditional mean at zero neighbour sum|, |zeta_i|).
  double zeta_safe = 0.0;
};

/// Conditional precision sigma^-2 + n_i gamma^2.
inline double conditional_precision(const ModelParams& params, std::size_t degree) {
  return 1.0 / (params.sigma * params.sigma) +
         static_cast<double>(degree) * params.gamma * params.gamma;
}

FullConditional full_conditional(const ModelParams& params, const NeighborhoodGraph& graph,
                                 std::span<const double> x, SiteIndex i);

/// Unnormalized log prior (include_likelihood = false) or log posterior.
/// Returns -inf when x leaves [0,1]^N.
double log_density_unnormalized(const ModelParams& params, const NeighborhoodGraph& graph,
                                std::span<const double> x, bool include_likelihood);

ThermoConstants thermo_constants(const ModelParams& params, const NeighborhoodGraph& graph);

/// {"gamma": g, "sigma": s, "y": [...]}
ModelParams params_from_json(const nlohmann::json& doc);
nlohmann::json params_to_json(const ModelParams& params);
ModelParams load_params(const std::filesystem::path& path);

} // namespace gibbs_tv
