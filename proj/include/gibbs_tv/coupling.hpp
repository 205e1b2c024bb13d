#pragma once

#include "gibbs_tv/bounds.hpp"
#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/model.hpp"
#include "gibbs_tv/rng.hpp"
#include "gibbs_tv/sampler.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace gibbs_tv {

enum class CouplingMode { Maximal, Synchronous };

struct SiteCoupling {
  double x_val = 0.0;
  double z_val = 0.0;
  bool met = false;
};

/// Area-under-the-density coupling of two truncated full conditionals.
///
/// x_val is drawn from f with a uniform height under f(x_val). If that point
/// also lies under g the chains meet. Otherwise z_val is the abscissa of a
/// uniform point of {(a, b) : g(a) >= b >= f(a)}, obtained by rejection from
/// the area under g. Meets with probability 1 - d_TV(f, g).
SiteCoupling max_couple_site(const FullConditional& fc_x, const FullConditional& fc_z,
                             SeededStream& rng);

/// Common-random-number coupling: both values are inverse-CDF images of u.
SiteCoupling synchronous_couple_site(const FullConditional& fc_x,
                                     const FullConditional& fc_z, double u);

/// Two chains advanced with a shared site schedule.
class CoupledPair {
public:
  CoupledPair(ChainState x, ChainState z);

  const ChainState& x() const { return x_; }
  const ChainState& z() const { return z_; }
  std::uint64_t t() const { return x_.t; }
  std::size_t num_sites() const { return x_.x.size(); }

  bool all_equal() const { return unequal_ == 0; }
  std::size_t unequal_count() const { return unequal_; }

  /// Whether the most recent update of each site left the two values equal.
  /// Sites never updated report whether they started equal.
  std::span<const std::uint8_t> site_coalesced() const { return site_coalesced_; }

  /// Number of coupled steps taken (the shared schedule position).
  std::uint64_t schedule_position() const { return schedule_position_; }

  void assign_site(SiteIndex i, double x_val, double z_val);

private:
  ChainState x_;
  ChainState z_;
  std::vector<std::uint8_t> site_coalesced_;
  std::size_t unequal_ = 0;
  std::uint64_t schedule_position_ = 0;
};

struct CoupledStep {
  SiteIndex site = 0;
  bool met = false;
};

/// One shared-site update of both chains under the chosen coupling.
CoupledStep coupled_gibbs_step(CoupledPair& pair, CouplingMode mode,
                               const ModelParams& params, const NeighborhoodGraph& graph,
                               SeededStream& rng);

struct ReplicaOutcome {
  bool coalesced = false;          ///< chains identical at tau + M
  std::int64_t coalescence_time = -1; ///< first t with identical chains, -1 if never
  std::int64_t collector_time = -1;   ///< first m <= M with every site visited, else -1
};

struct OneShotReport {
  double epsilon = 0.0;
  std::uint64_t tau = 0;
  std::uint64_t M = 0;
  std::uint64_t replicas = 0;
  std::uint64_t noncoalesced_count = 0;
  double noncoalesced_fraction = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 1.0;
  bool ci_usable = false;
  std::uint64_t coupon_time_exceeded_count = 0;
  BoundReport bound;
  std::vector<ReplicaOutcome> outcomes;
};

struct OneShotOptions {
  std::uint64_t master_seed = 0;
  std::uint64_t replicas = 1;
  unsigned threads = 1;
  /// Refuse schedules longer than this many coupled steps per replica.
  std::uint64_t max_schedule = 1'000'000'000ULL;
};

/// Fewer replicas than this make the 95% interval unreliable.
inline constexpr std::uint64_t kMinReplicasForInterval = 30;

/// Synchronous coupling for tau = ceil(theta(omega^2)) steps, then maximal
/// coupling for M steps, independently per replica.
OneShotReport one_shot_schedule(const ModelParams& params, const NeighborhoodGraph& graph,
                                double epsilon, std::span<const double> init_x,
                                std::span<const double> init_z, const OneShotOptions& options);

nlohmann::json to_json(const OneShotReport& report);
void write_coalescence_csv(const std::filesystem::path& path, const OneShotReport& report);

CouplingMode parse_coupling_mode(std::string_view name);

} // namespace gibbs_tv
