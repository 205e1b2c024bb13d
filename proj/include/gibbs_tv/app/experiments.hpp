#pragma once

#include "gibbs_tv/app/config.hpp"
#include "gibbs_tv/app/pgm.hpp"
#include "gibbs_tv/bounds.hpp"
#include "gibbs_tv/metrics.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gibbs_tv::app {

/// What every subcommand produces: a machine-readable report, a short
/// human-readable rendering, the overall verdict and the files written.
struct CommandResult {
  nlohmann::json report;
  std::string summary;
  bool passed = true;
  std::vector<std::filesystem::path> outputs;
};

struct ContractionResult {
  std::vector<PairSummary> series;
  std::optional<DecayFit> fit;
  double theoretical_rate = 0.0;
  std::string verdict; ///< "pass", "fail" or "degenerate"
};

/// Synchronous coupling from extremal (or identical) starts; one PairSummary
/// per recorded time and a decay-rate fit against the Wasserstein rate.
ContractionResult contraction_series(const ExperimentConfig& config, const Model& model);

struct RestoreResult {
  std::vector<double> y;
  PgmImage restored;
  std::uint64_t burn_in = 0;
  std::uint64_t average_steps = 0;
  std::uint64_t recommended_steps = 0;
  bool capped = false;
  BoundReport bound;
};

/// Degrades `truth` (unless `observed` is supplied) and restores it by the
/// ergodic posterior mean after a burn-in of the recommended length.
RestoreResult degrade_and_restore(const ExperimentConfig& config, std::size_t width,
                                  std::size_t height, const std::vector<double>* truth,
                                  const std::vector<double>* observed);

std::string render_bound_report(const BoundReport& report, double wasserstein_at_epsilon);

CommandResult run_bound(const ExperimentConfig& config);
CommandResult run_degrade(const ExperimentConfig& config);
CommandResult run_restore(const ExperimentConfig& config);
CommandResult run_contraction(const ExperimentConfig& config);
CommandResult run_certificate(const ExperimentConfig& config);
CommandResult run_collector(const ExperimentConfig& config);
CommandResult run_verify(const ExperimentConfig& config);

CommandResult run_command(const ExperimentConfig& config);

} // namespace gibbs_tv::app
