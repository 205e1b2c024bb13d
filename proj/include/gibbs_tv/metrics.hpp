#pragma once

#include "gibbs_tv/coupling.hpp"
#include "gibbs_tv/graph.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace gibbs_tv {

/// sum_i n_i |x_i - z_i|. Degree-0 sites contribute nothing, so this is a
/// pseudometric on graphs with isolated sites.
double weighted_l1(std::span<const double> x, std::span<const double> z,
                   const NeighborhoodGraph& graph);

/// sum_i |x_i - z_i|
double taxicab(std::span<const double> x, std::span<const double> z);

/// Replica averages of d, d-hat and the indicator x != z. Each is an upper
/// estimate of the corresponding distance between the two laws, since the
/// coupling used is one admissible joint distribution.
struct PairSummary {
  std::uint64_t t = 0;
  double mean_weighted_d = 0.0;
  double se_weighted_d = 0.0;
  double mean_taxicab = 0.0;
  double se_taxicab = 0.0;
  double noncoalesced_fraction = 0.0;
  double se_noncoalesced = 0.0;
  std::uint64_t replica_count = 0;
};

PairSummary summarize_pairs(std::span<const CoupledPair> pairs, const NeighborhoodGraph& graph);

/// Implied bounds from a TV value and a taxicab-Wasserstein value.
struct MetricConversion {
  double taxicab_w_from_tv = 0.0;  ///< d_What <= N tv
  double weighted_w_from_tv = 0.0; ///< d_W <= n_max N tv
  double weighted_w_lower = 0.0;   ///< n_min d_What
  double weighted_w_upper = 0.0;   ///< n_max d_What
};

MetricConversion metric_conversion_bounds(double tv, double taxicab_w,
                                          const NeighborhoodGraph& graph);

/// Least-squares fit of log E[d(t)] = a + t log(rate).
struct DecayFit {
  double rate = 0.0;
  double rate_se = 0.0;
  std::uint64_t window_begin = 0;
  std::uint64_t window_end = 0; ///< inclusive
  std::size_t points = 0;
};

/// Fits over the leading window where the mean exceeds `snr` times its
/// standard error. Returns nothing when fewer than three points qualify.
std::optional<DecayFit> fit_decay_rate(std::span<const PairSummary> series, double snr = 10.0);

/// Header t,mean_d,se_d,mean_dhat,se_dhat,frac_neq,se_frac
void write_summary_csv_header(std::ostream& out);
void append_summary_csv(std::ostream& out, const PairSummary& row);

} // namespace gibbs_tv
