#pragma once

#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

// Independent verification machinery. Nothing here is used by the sampler or
// the couplings; the routines recompute the same quantities by quadrature,
// combinatorics, or exact propagation of a discretized chain.
namespace gibbs_tv::oracle {

/// Mass of Normal(mean, variance) on [lo, hi], from erfc differences taken in
/// whichever tail avoids cancellation.
double normal_mass_on_interval(double mean, double variance, double lo, double hi);

inline double normal_mass_on_unit_interval(double mean, double variance) {
  return normal_mass_on_interval(mean, variance, 0.0, 1.0);
}

/// CDF of Normal(mean, variance) conditioned on [0,1], as a mass ratio.
double truncated_cdf(double mean, double variance, double x);

/// 1/2 int_0^1 |f - g| for the two truncated densities. The interval is split
/// at the (at most two) crossing points of f and g, each piece is covered by
/// `grid_points` Simpson panels, and panels are refined adaptively until the
/// Richardson estimate is below the absolute tolerance.
double numeric_tv_truncated(const FullConditional& fc1, const FullConditional& fc2,
                            std::size_t grid_points = 2000, double tolerance = 1e-12);

/// 1/2 int |phi_1 - phi_2| for two normals with common sigma, by quadrature.
double numeric_tv_normal(double mu1, double mu2, double sigma, std::size_t grid_points = 2000,
                         double tolerance = 1e-12);

/// Exact P[theta > M] for the coupon collector with N coupons, by
/// inclusion-exclusion. Falls back to the occupancy recursion when the
/// alternating sum would lose precision.
double coupon_collector_tail(std::size_t num_coupons, std::uint64_t draws);

/// P[theta > M] by forward recursion on the number of distinct coupons seen.
double coupon_collector_tail_recursive(std::size_t num_coupons, std::uint64_t draws);

/// Number of replicas (out of `replicas`) whose collection time exceeds M.
std::uint64_t simulate_coupon_collector(std::size_t num_coupons, std::uint64_t draws,
                                        std::uint64_t replicas, std::uint64_t master_seed);

/// Random-scan Gibbs chain on a grid of L cells per coordinate.
///
/// Cell c covers [c/L, (c+1)/L]; neighbour values enter the full conditional
/// through cell midpoints, and the new cell of the updated site is drawn with
/// the exact truncated-normal probability of each cell. This is a genuine
/// Markov chain approximating the continuous one; use it for qualitative
/// comparisons, not for tight numeric agreement.
class DiscretizedChain {
public:
  static constexpr std::size_t kMaxSites = 3;
  static constexpr std::size_t kMaxStates = 100'000;

  DiscretizedChain(const ModelParams& params, const NeighborhoodGraph& graph,
                   std::size_t levels);

  std::size_t num_sites() const { return num_sites_; }
  std::size_t levels() const { return levels_; }
  std::size_t num_states() const { return num_states_; }

  /// Cell of each coordinate, packed as sum_i c_i L^i.
  std::size_t encode(std::span<const double> x) const;
  std::vector<std::size_t> decode(std::size_t state) const;

  /// Sparse transition row: (successor state, probability).
  std::vector<std::pair<std::size_t, double>> transition_row(std::size_t state) const;

  /// mu -> mu P
  std::vector<double> propagate(std::span<const double> mu) const;

  /// Power iteration from the uniform distribution until the L1 change per
  /// step falls below `tolerance`.
  std::vector<double> stationary(double tolerance = 1e-13,
                                 std::size_t max_iterations = 1'000'000) const;

  /// Cell probabilities of site i given the sum of its neighbours' cell indices.
  std::span<const double> cell_probabilities(SiteIndex i, std::size_t neighbor_cell_sum) const;

private:
  std::size_t num_sites_;
  std::size_t levels_;
  std::size_t num_states_;
  std::vector<std::size_t> stride_;
  std::vector<std::vector<SiteIndex>> neighbors_;
  // per site: (n_i (L-1) + 1) rows of L probabilities
  std::vector<std::vector<double>> conditional_;
};

/// d_TV(mu1^t, mu2^t) for t = 0..t_max, where mu^0 are point masses at the
/// cells containing init1 and init2.
std::vector<double> discretized_chain_exact_tv(const ModelParams& params,
                                               const NeighborhoodGraph& graph,
                                               std::size_t levels,
                                               std::span<const double> init1,
                                               std::span<const double> init2,
                                               std::uint64_t t_max);

/// CSV with header t,tv.
void write_tv_series_csv(const std::filesystem::path& path, std::span<const double> tv);

} // namespace gibbs_tv::oracle
