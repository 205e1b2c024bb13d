#include "gibbs_tv/sampler.hpp"

#include "gibbs_tv/normal.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace gibbs_tv {

void ChainState::validate() const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
      throw std::invalid_argument("chain state coordinate " + std::to_string(i) +
                                  " = " + std::to_string(x[i]) + " lies outside [0,1]");
    }
  }
}

double sample_truncated_normal(double mean, double variance, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("sample_truncated_normal: u must lie in (0,1)");
  }
  if (!(variance > 0.0)) {
    throw std::domain_error("sample_truncated_normal: variance must be positive");
  }
  return TruncatedNormal(mean, variance).quantile(u);
}

SiteIndex gibbs_step(ChainState& state, const ModelParams& params,
                     const NeighborhoodGraph& graph, SeededStream& rng) {
  const SiteIndex i = rng.uniform_index(graph.num_sites());
  const auto fc = full_conditional(params, graph, state.x, i);
  state.x[i] = sample_truncated_normal(fc.mean, fc.variance, rng.uniform_open());
  ++state.t;
  return i;
}

ChainTrace run_chain(const ChainState& init, std::uint64_t steps, const ModelParams& params,
                     const NeighborhoodGraph& graph, SeededStream& rng,
                     std::uint64_t record_every) {
  params.validate(graph);
  if (init.x.size() != graph.num_sites()) {
    throw std::invalid_argument("initial state length does not match graph size");
  }
  init.validate();

  ChainTrace trace;
  trace.snapshots.push_back(init);
  trace.final_state = init;
  auto& state = trace.final_state;
  const std::size_t n = state.x.size();
  if (steps == 0) {
    trace.running_mean = init.x;
    return trace;
  }
  // Running sums are updated lazily: each coordinate accumulates its value
  // times the number of steps it has held it.
  std::vector<double> sum(n, 0.0);
  std::vector<double> held = state.x;
  std::vector<std::uint64_t> held_since(n, 0);
  for (std::uint64_t s = 1; s <= steps; ++s) {
    const SiteIndex i = gibbs_step(state, params, graph, rng);
    sum[i] += held[i] * static_cast<double>(s - 1 - held_since[i]);
    held[i] = state.x[i];
    held_since[i] = s - 1;
    if (record_every > 0 && s % record_every == 0) {
      trace.snapshots.push_back(state);
    }
  }
  trace.running_mean.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] += state.x[i] * static_cast<double>(steps - held_since[i]);
    trace.running_mean[i] = sum[i] / static_cast<double>(steps);
  }
  return trace;
}

std::vector<double> degrade(std::span<const double> x_true, double sigma, SeededStream& rng) {
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("degrade: sigma must be nonnegative");
  }
  std::vector<double> y(x_true.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = x_true[i] + sigma * rng.standard_normal();
  }
  return y;
}

void write_trace_csv(const std::filesystem::path& path, std::span<const ChainState> trace) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write trace CSV " + path.string());
  }
  const std::size_t n = trace.empty() ? 0 : trace.front().x.size();
  out << "t";
  for (std::size_t i = 0; i < n; ++i) {
    out << ",x_" << i;
  }
  out << '\n' << std::setprecision(17);
  for (const auto& s : trace) {
    out << s.t;
    for (const double v : s.x) {
      out << ',' << v;
    }
    out << '\n';
  }
}

} // namespace gibbs_tv
