#pragma once

#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/model.hpp"
#include "gibbs_tv/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace gibbs_tv {

/// A point of [0,1]^N and the number of single-site updates applied so far.
struct ChainState {
  std::vector<double> x;
  std::uint64_t t = 0;

  /// Throws if any coordinate leaves [0,1].
  void validate() const;
};

/// Inverse-CDF draw from Normal(mean, variance) restricted to [0,1].
double sample_truncated_normal(double mean, double variance, double u);

/// One random-scan update: a uniform site, then a truncated-normal draw from
/// its full conditional. Consumes exactly two variates. Returns the site.
SiteIndex gibbs_step(ChainState& state, const ModelParams& params,
                     const NeighborhoodGraph& graph, SeededStream& rng);

struct ChainTrace {
  std::vector<ChainState> snapshots;
  /// Coordinate-wise average of X^1..X^steps (the initial state when steps = 0).
  std::vector<double> running_mean;
  ChainState final_state;
};

/// Applies gibbs_step `steps` times, keeping the initial state and every
/// `record_every`-th state (record_every = 0 keeps only the initial state).
ChainTrace run_chain(const ChainState& init, std::uint64_t steps, const ModelParams& params,
                     const NeighborhoodGraph& graph, SeededStream& rng,
                     std::uint64_t record_every);

/// y_i = x_i + sigma * Z_i with i.i.d. standard normal Z_i; never clamped.
std::vector<double> degrade(std::span<const double> x_true, double sigma, SeededStream& rng);

/// CSV with header t,x_0,...,x_{N-1}.
void write_trace_csv(const std::filesystem::path& path, std::span<const ChainState> trace);

} // namespace gibbs_tv
