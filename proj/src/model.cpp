#include "gibbs_tv/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace gibbs_tv {

void ModelParams::validate(const NeighborhoodGraph& graph) const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be positive and finite");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be nonnegative and finite");
  }
  if (y.size() != graph.num_sites()) {
    throw std::invalid_argument("observed image has " + std::to_string(y.size()) +
                                " values but the graph has " +
                                std::to_string(graph.num_sites()) + " sites");
  }
  if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("observed image contains non-finite values");
  }
}

FullConditional full_conditional(const ModelParams& params, const NeighborhoodGraph& graph,
                                 std::span<const double> x, SiteIndex i) {
  const auto neighbors = graph.neighbors(i);
  double neighbor_sum = 0.0;
  for (const SiteIndex j : neighbors) {
    neighbor_sum += x[j];
  }
  const double inv_noise = 1.0 / (params.sigma * params.sigma);
  const double g2 = params.gamma * params.gamma;
  const double variance = 1.0 / (inv_noise + static_cast<double>(neighbors.size()) * g2);
  return {i, variance * (inv_noise * params.y[i] + g2 * neighbor_sum), variance};
}

double log_density_unnormalized(const ModelParams& params, const NeighborhoodGraph& graph,
                                std::span<const double> x, bool include_likelihood) {
  if (x.size() != graph.num_sites()) {
    throw std::invalid_argument("state length " + std::to_string(x.size()) +
                                " does not match graph size " +
                                std::to_string(graph.num_sites()));
  }
  if (include_likelihood && params.y.size() != x.size()) {
    throw std::invalid_argument("observed image length does not match state length");
  }
  for (const double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  double log_density = 0.0;
  for (const auto& [i, j] : graph.edges()) {
    const double diff = params.gamma * (x[i] - x[j]);
    log_density -= 0.5 * diff * diff;
  }
  if (include_likelihood) {
    const double inv_two_var = 1.0 / (2.0 * params.sigma * params.sigma);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = x[i] - params.y[i];
      log_density -= r * r * inv_two_var;
    }
  }
  return log_density;
}

ThermoConstants thermo_constants(const ModelParams& params, const NeighborhoodGraph& graph) {
  params.validate(graph);
  const std::size_t n = graph.num_sites();
  const double inv_noise = 1.0 / (params.sigma * params.sigma);
  const double g2 = params.gamma * params.gamma;
  const double n_max = static_cast<double>(graph.n_max());

  ThermoConstants c;
  c.zeta_i.resize(n);
  c.sigma_tilde_sq_i.resize(n);
  double min_var = std::numeric_limits<double>::infinity();
  for (SiteIndex i = 0; i < n; ++i) {
    const double var = 1.0 / (inv_noise + static_cast<double>(graph.degree(i)) * g2);
    c.sigma_tilde_sq_i[i] = var;
    c.zeta_i[i] = var * (inv_noise * params.y[i] + g2 * n_max);
    c.zeta = std::max(c.zeta, std::abs(c.zeta_i[i]));
    c.zeta_safe = std::max({c.zeta_safe, std::abs(var * inv_noise * params.y[i]),
                            std::abs(c.zeta_i[i])});
    min_var = std::min(min_var, var);
  }
  c.sigma_tilde = std::sqrt(min_var);
  return c;
}

ModelParams params_from_json(const nlohmann::json& doc) {
  ModelParams p;
  p.gamma = doc.at("gamma").get<double>();
  p.sigma = doc.at("sigma").get<double>();
  p.y = doc.at("y").get<std::vector<double>>();
  return p;
}

nlohmann::json params_to_json(const ModelParams& params) {
  return {{"gamma", params.gamma}, {"sigma", params.sigma}, {"y", params.y}};
}

ModelParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open model file " + path.string());
  }
  try {
    return params_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

} // namespace gibbs_tv
