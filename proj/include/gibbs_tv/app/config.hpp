#pragma once

#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gibbs_tv::app {

enum class Command { Bound, Degrade, Restore, Contraction, Certificate, Collector, Verify };

Command parse_command(std::string_view name);
std::string_view command_name(Command command);

/// Environment variable that overrides the built-in default seed.
inline constexpr const char* kSeedEnvVar = "GIBBS_TV_SEED";
inline constexpr std::uint64_t kBuiltinSeed = 2024;

/// Built-in seed, or the value of GIBBS_TV_SEED when set.
std::uint64_t default_seed();

struct ExperimentConfig {
  Command mode = Command::Bound;

  // Model: a grid (or a custom graph file) with gamma, sigma and y.
  std::size_t width = 2;
  std::size_t height = 2;
  Neighborhood scheme = Neighborhood::N4;
  double gamma = 1.0;
  double sigma = 1.0;
  double y_const = 0.5;
  std::vector<double> y;             ///< overrides y_const when non-empty
  std::filesystem::path graph_file;  ///< custom edge list instead of the grid
  std::filesystem::path params_file; ///< ModelParams JSON (gamma, sigma, y)
  std::filesystem::path observation; ///< y from an observation file

  double epsilon = 0.1;
  std::uint64_t replicas = 1000;
  std::uint64_t seed = kBuiltinSeed;
  unsigned threads = 1;

  std::filesystem::path input;             ///< PGM for degrade/restore
  std::filesystem::path output_dir = ".";

  // contraction
  std::uint64_t steps = 200;
  std::uint64_t record_every = 1;
  std::string init = "extremal"; ///< "extremal" (all 0 vs all 1) or "identical"

  // restore
  std::uint64_t max_steps = 2'000'000;
  std::uint64_t average_steps = 0; ///< 0: same as the burn-in length

  // verify
  std::uint64_t iterations = 1000;
  std::uint64_t trials = 100'000;

  // collector
  std::vector<std::size_t> collector_sizes{4, 16, 64};
  std::vector<double> collector_epsilons{0.1, 0.01};

  /// Throws on out-of-range values (replicas >= 1, epsilon in (0,1), ...).
  void validate() const;
};

/// Applies the keys present in `doc` on top of `base`. Unknown keys are errors.
ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);
nlohmann::json to_json(const ExperimentConfig& config);

struct Model {
  NeighborhoodGraph graph;
  ModelParams params;
};

/// Resolves graph and parameters from whichever sources the config names.
Model build_model(const ExperimentConfig& config);

} // namespace gibbs_tv::app
