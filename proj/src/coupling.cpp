#include "gibbs_tv/coupling.hpp"

#include "gibbs_tv/normal.hpp"
#include "gibbs_tv/parallel.hpp"
#include "gibbs_tv/stats.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace gibbs_tv {

namespace {

// Rejection from the area under g accepts with probability d_TV(f, g); the
// residual branch is only entered with that same probability, so the
// expected work per coupled update is one proposal. The cap guards against
// a TV that is positive only through rounding.
constexpr std::uint64_t kMaxResidualProposals = 100'000'000ULL;

} // namespace

SiteCoupling max_couple_site(const FullConditional& fc_x, const FullConditional& fc_z,
                             SeededStream& rng) {
  const TruncatedNormal f(fc_x.mean, fc_x.variance);
  const TruncatedNormal g(fc_z.mean, fc_z.variance);

  const double a1 = f.quantile(rng.uniform_open());
  const double log_f_a1 = f.log_pdf(a1);
  // a2 = u * f(a1) lies under g iff log u + log f(a1) <= log g(a1).
  if (std::log(rng.uniform_open()) + log_f_a1 <= g.log_pdf(a1)) {
    return {a1, a1, true};
  }
  for (std::uint64_t k = 0; k < kMaxResidualProposals; ++k) {
    const double b1 = g.quantile(rng.uniform_open());
    const double log_g_b1 = g.log_pdf(b1);
    // b2 = u * g(b1); keep the point when it sits above f.
    if (std::log(rng.uniform_open()) + log_g_b1 >= f.log_pdf(b1)) {
      return {a1, b1, false};
    }
  }
  throw std::runtime_error("max_couple_site: residual region has numerically zero area");
}

SiteCoupling synchronous_couple_site(const FullConditional& fc_x,
                                     const FullConditional& fc_z, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("synchronous_couple_site: u must lie in (0,1)");
  }
  const double xv = TruncatedNormal(fc_x.mean, fc_x.variance).quantile(u);
  const double zv = (fc_x.mean == fc_z.mean && fc_x.variance == fc_z.variance)
                        ? xv
                        : TruncatedNormal(fc_z.mean, fc_z.variance).quantile(u);
  return {xv, zv, xv == zv};
}

CoupledPair::CoupledPair(ChainState x, ChainState z) : x_(std::move(x)), z_(std::move(z)) {
  if (x_.x.size() != z_.x.size()) {
    throw std::invalid_argument("coupled chains must have the same number of sites");
  }
  if (x_.t != z_.t) {
    throw std::invalid_argument("coupled chains must start at the same time");
  }
  x_.validate();
  z_.validate();
  site_coalesced_.resize(x_.x.size());
  for (std::size_t i = 0; i < x_.x.size(); ++i) {
    site_coalesced_[i] = x_.x[i] == z_.x[i];
    unequal_ += site_coalesced_[i] ? 0 : 1;
  }
}

void CoupledPair::assign_site(SiteIndex i, double x_val, double z_val) {
  const bool was_equal = x_.x[i] == z_.x[i];
  const bool now_equal = x_val == z_val;
  x_.x[i] = x_val;
  z_.x[i] = z_val;
  site_coalesced_[i] = now_equal;
  if (was_equal && !now_equal) {
    ++unequal_;
  } else if (!was_equal && now_equal) {
    --unequal_;
  }
  ++x_.t;
  ++z_.t;
  ++schedule_position_;
}

CoupledStep coupled_gibbs_step(CoupledPair& pair, CouplingMode mode,
                               const ModelParams& params, const NeighborhoodGraph& graph,
                               SeededStream& rng) {
  const SiteIndex i = rng.uniform_index(graph.num_sites());
  const auto fc_x = full_conditional(params, graph, pair.x().x, i);
  const auto fc_z = full_conditional(params, graph, pair.z().x, i);
  const SiteCoupling c = mode == CouplingMode::Maximal
                             ? max_couple_site(fc_x, fc_z, rng)
                             : synchronous_couple_site(fc_x, fc_z, rng.uniform_open());
  pair.assign_site(i, c.x_val, c.z_val);
  return {i, c.x_val == c.z_val};
}

OneShotReport one_shot_schedule(const ModelParams& params, const NeighborhoodGraph& graph,
                                double epsilon, std::span<const double> init_x,
                                std::span<const double> init_z, const OneShotOptions& options) {
  if (options.replicas == 0) {
    throw std::invalid_argument("one_shot_schedule: at least one replica is required");
  }
  if (init_x.size() != graph.num_sites() || init_z.size() != graph.num_sites()) {
    throw std::invalid_argument("one_shot_schedule: initial states do not match the graph");
  }
  OneShotReport report;
  report.bound = tv_mixing_time(params, graph, epsilon);
  report.epsilon = epsilon;
  report.tau = report.bound.tau;
  report.M = report.bound.M;
  report.replicas = options.replicas;
  if (report.tau > options.max_schedule ||
      report.M > options.max_schedule - report.tau) {
    throw std::runtime_error("one_shot_schedule: schedule of " +
                             std::to_string(report.bound.total_time) +
                             " steps exceeds the configured maximum of " +
                             std::to_string(options.max_schedule));
  }

  const ChainState start_x{{init_x.begin(), init_x.end()}, 0};
  const ChainState start_z{{init_z.begin(), init_z.end()}, 0};
  const std::size_t n = graph.num_sites();

  report.outcomes = parallel_map_indexed(
      options.replicas, options.threads, [&](std::size_t r) {
        SeededStream rng(options.master_seed, {StreamPurpose::Certificate, r, 0});
        CoupledPair pair(start_x, start_z);
        ReplicaOutcome out;
        if (pair.all_equal()) {
          out.coalescence_time = 0;
        }
        const auto note_coalescence = [&] {
          if (out.coalescence_time < 0 && pair.all_equal()) {
            out.coalescence_time = static_cast<std::int64_t>(pair.t());
          }
        };
        for (std::uint64_t s = 0; s < report.tau; ++s) {
          coupled_gibbs_step(pair, CouplingMode::Synchronous, params, graph, rng);
          note_coalescence();
        }
        std::vector<std::uint8_t> visited(n, 0);
        std::size_t visited_count = 0;
        for (std::uint64_t m = 1; m <= report.M; ++m) {
          const auto step = coupled_gibbs_step(pair, CouplingMode::Maximal, params, graph, rng);
          note_coalescence();
          if (!visited[step.site]) {
            visited[step.site] = 1;
            if (++visited_count == n) {
              out.collector_time = static_cast<std::int64_t>(m);
            }
          }
        }
        out.coalesced = pair.all_equal();
        return out;
      });

  for (const auto& o : report.outcomes) {
    report.noncoalesced_count += o.coalesced ? 0 : 1;
    report.coupon_time_exceeded_count += o.collector_time < 0 ? 1 : 0;
  }
  const auto ci = wilson_interval(report.noncoalesced_count, report.replicas, 0.95);
  report.noncoalesced_fraction = ci.estimate;
  report.ci_lower = ci.lower;
  report.ci_upper = ci.upper;
  report.ci_usable = report.replicas >= kMinReplicasForInterval;
  return report;
}

nlohmann::json to_json(const OneShotReport& r) {
  return {
      {"epsilon", r.epsilon},
      {"tau", r.tau},
      {"M", r.M},
      {"replicas", r.replicas},
      {"noncoalesced_count", r.noncoalesced_count},
      {"noncoalesced_fraction", r.noncoalesced_fraction},
      {"ci95_lower", r.ci_lower},
      {"ci95_upper", r.ci_upper},
      {"ci_usable", r.ci_usable},
      {"coupon_time_exceeded_count", r.coupon_time_exceeded_count},
      {"coupon_time_exceeded_fraction",
       static_cast<double>(r.coupon_time_exceeded_count) / static_cast<double>(r.replicas)},
      {"bound", to_json(r.bound)},
  };
}

void write_coalescence_csv(const std::filesystem::path& path, const OneShotReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write coalescence CSV " + path.string());
  }
  out << "replica,coalesced,coalescence_time,collector_time\n";
  for (std::size_t r = 0; r < report.outcomes.size(); ++r) {
    const auto& o = report.outcomes[r];
    out << r << ',' << (o.coalesced ? 1 : 0) << ',' << o.coalescence_time << ','
        << o.collector_time << '\n';
  }
}

CouplingMode parse_coupling_mode(std::string_view name) {
  if (name == "maximal") {
    return CouplingMode::Maximal;
  }
  if (name == "synchronous") {
    return CouplingMode::Synchronous;
  }
  throw std::invalid_argument("unknown coupling mode '" + std::string(name) + "'");
}

} // namespace gibbs_tv
