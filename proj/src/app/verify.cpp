#include "gibbs_tv/app/verify.hpp"

#include "gibbs_tv/coupling.hpp"
#include "gibbs_tv/graph.hpp"
#include "gibbs_tv/model.hpp"
#include "gibbs_tv/oracle.hpp"
#include "gibbs_tv/parallel.hpp"
#include "gibbs_tv/rng.hpp"
#include "gibbs_tv/sampler.hpp"
#include "gibbs_tv/stats.hpp"

#include <algorithm>
#include <cmath>

namespace gibbs_tv::app {

namespace {

constexpr double kQuadratureTolerance = 1e-9;
constexpr double kKsSignificance = 0.001;
constexpr double kMeetRateTolerance = 0.01;

// Parameter box for the randomized inequality suites.
constexpr double kMeanLo = -2.0;
constexpr double kMeanHi = 3.0;
constexpr double kVarLo = 0.01;
constexpr double kVarHi = 5.0;

double draw(SeededStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform_open(); }

SeededStream suite_stream(const VerifyOptions& o, std::uint64_t suite) {
  return SeededStream(o.seed, {StreamPurpose::Verify, suite, 0});
}

SuiteResult finish(SuiteResult r) {
  r.status = r.passed == r.cases ? "pass" : "fail";
  return r;
}

SuiteResult mass_lower_bound_suite(const VerifyOptions& o) {
  SuiteResult r{"mass_lower_bound", "", o.iterations, 0, {}};
  auto rng = suite_stream(o, 1);
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < o.iterations; ++k) {
    const double zeta = draw(rng, kMeanLo, kMeanHi);
    const double var = draw(rng, kVarLo, kVarHi);
    const auto m = o.mass_lower_bound(zeta, var);
    if (m.mass >= m.lower_bound) {
      ++r.passed;
    }
    worst_ratio = std::min(worst_ratio, m.mass / m.lower_bound);
  }
  r.details = {{"min_mass_over_bound", worst_ratio}};
  return finish(std::move(r));
}

SuiteResult truncated_tv_suite(const VerifyOptions& o) {
  SuiteResult r{"truncated_tv_domination", "", o.iterations, 0, {}};
  auto rng = suite_stream(o, 2);
  double max_slack_violation = 0.0;
  for (std::uint64_t k = 0; k < o.iterations; ++k) {
    const double m1 = draw(rng, kMeanLo, kMeanHi);
    const double m2 = draw(rng, kMeanLo, kMeanHi);
    const double var = draw(rng, kVarLo, kVarHi);
    const FullConditional f1{0, m1, var};
    const FullConditional f2{0, m2, var};
    const double tv = oracle::numeric_tv_truncated(f1, f2);
    const double exact = normal_tv(m1, m2, std::sqrt(var)).exact;
    const double bound = truncated_tv_bound(exact, TruncatedNormal(m1, var).mass(),
                                            TruncatedNormal(m2, var).mass());
    if (tv <= bound + kQuadratureTolerance) {
      ++r.passed;
    } else {
      max_slack_violation = std::max(max_slack_violation, tv - bound);
    }
  }
  r.details = {{"max_violation", max_slack_violation}};
  return finish(std::move(r));
}

SuiteResult normal_tv_suite(const VerifyOptions& o) {
  SuiteResult r{"normal_tv_bound", "", o.iterations, 0, {}};
  auto rng = suite_stream(o, 3);
  double max_quadrature_gap = 0.0;
  for (std::uint64_t k = 0; k < o.iterations; ++k) {
    const double m1 = draw(rng, kMeanLo, kMeanHi);
    const double m2 = draw(rng, kMeanLo, kMeanHi);
    const double sigma = std::sqrt(draw(rng, kVarLo, kVarHi));
    const auto tv = normal_tv(m1, m2, sigma);
    const double gap = std::abs(tv.exact - oracle::numeric_tv_normal(m1, m2, sigma));
    max_quadrature_gap = std::max(max_quadrature_gap, gap);
    if (tv.bound >= tv.exact && gap <= kQuadratureTolerance) {
      ++r.passed;
    }
  }
  r.details = {{"max_quadrature_gap", max_quadrature_gap}};
  return finish(std::move(r));
}

// Per-site noncoalescence bound on random states of a 3x3 model.
SuiteResult per_site_suite(const VerifyOptions& o) {
  const std::uint64_t cases = std::min<std::uint64_t>(o.iterations, 40);
  const std::uint64_t trials = std::max<std::uint64_t>(o.trials / 10, 1);
  SuiteResult r{"per_site_noncoalescence_bound", "", cases, 0, {}};
  auto rng = suite_stream(o, 4);
  const auto graph = build_grid_graph(3, 3, Neighborhood::N4);
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t k = 0; k < cases; ++k) {
    ModelParams params;
    params.gamma = draw(rng, 0.05, 0.6);
    params.sigma = draw(rng, 0.3, 1.5);
    params.y.resize(graph.num_sites());
    for (auto& v : params.y) {
      v = draw(rng, -0.5, 1.5);
    }
    std::vector<double> x(graph.num_sites());
    std::vector<double> z(graph.num_sites());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform_open();
      z[i] = std::clamp(x[i] + draw(rng, -0.05, 0.05), 0.0, 1.0);
    }
    const SiteIndex site = rng.uniform_index(graph.num_sites());
    const auto constants = thermo_constants(params, graph);
    double diff = 0.0;
    for (const auto j : graph.neighbors(site)) {
      diff += std::abs(x[j] - z[j]);
    }
    const double bound = per_site_noncoalescence_bound(
        constants.zeta_i[site], constants.sigma_tilde_sq_i[site], params.gamma, diff);
    const auto fx = full_conditional(params, graph, x, site);
    const auto fz = full_conditional(params, graph, z, site);
    SeededStream trial_rng(o.seed, {StreamPurpose::Verify, k + 1, 4});
    std::uint64_t missed = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      missed += max_couple_site(fx, fz, trial_rng).met ? 0 : 1;
    }
    const double rate = static_cast<double>(missed) / static_cast<double>(trials);
    const double cap = std::min(1.0, bound);
    const double slack = 3.0 * binomial_standard_error(cap, trials) + 1.0 / static_cast<double>(trials);
    if (rate <= cap + slack) {
      ++r.passed;
    }
    rows.push_back({{"bound", bound}, {"miss_rate", rate}});
  }
  r.details = {{"trials_per_case", trials}, {"cases", rows}};
  return finish(std::move(r));
}

SuiteResult sampler_ks_suite(const VerifyOptions& o) {
  constexpr std::array<std::pair<double, double>, 5> kCases{
      {{0.5, 0.1}, {0.8333333333333334, 1.0 / 3.0}, {-1.0, 0.05}, {2.0, 0.5}, {0.2, 5.0}}};
  SuiteResult r{"sampler_ks", "", kCases.size(), 0, {}};
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < kCases.size(); ++k) {
    const auto [mean, var] = kCases[k];
    SeededStream rng(o.seed, {StreamPurpose::Verify, k + 1, 5});
    std::vector<double> draws(o.trials);
    for (auto& d : draws) {
      d = sample_truncated_normal(mean, var, rng.uniform_open());
    }
    const auto ks = ks_test(draws, [&](double v) { return oracle::truncated_cdf(mean, var, v); });
    if (ks.p_value >= kKsSignificance) {
      ++r.passed;
    }
    rows.push_back({{"mean", mean}, {"variance", var}, {"ks_d", ks.statistic}, {"p", ks.p_value}});
  }
  r.details = {{"cases", rows}};
  return finish(std::move(r));
}

SuiteResult coupling_suite(const VerifyOptions& o) {
  constexpr std::uint64_t kPairs = 20;
  SuiteResult r{"max_coupling_marginals", "", kPairs, 0, {}};
  auto rng = suite_stream(o, 6);
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t k = 0; k < kPairs; ++k) {
    const FullConditional fx{0, draw(rng, -0.5, 1.5), draw(rng, 0.02, 1.0)};
    const FullConditional fz{0, draw(rng, -0.5, 1.5), draw(rng, 0.02, 1.0)};
    const double tv = oracle::numeric_tv_truncated(fx, fz);
    SeededStream trial_rng(o.seed, {StreamPurpose::Verify, k + 1, 6});
    std::vector<double> xs(o.trials);
    std::vector<double> zs(o.trials);
    std::uint64_t met = 0;
    for (std::uint64_t t = 0; t < o.trials; ++t) {
      const auto c = max_couple_site(fx, fz, trial_rng);
      xs[t] = c.x_val;
      zs[t] = c.z_val;
      met += c.met ? 1 : 0;
    }
    const double rate = static_cast<double>(met) / static_cast<double>(o.trials);
    const auto ks_x = ks_test(xs, [&](double v) { return oracle::truncated_cdf(fx.mean, fx.variance, v); });
    const auto ks_z = ks_test(zs, [&](double v) { return oracle::truncated_cdf(fz.mean, fz.variance, v); });
    const bool ok = std::abs(rate - (1.0 - tv)) <= kMeetRateTolerance &&
                    ks_x.p_value >= kKsSignificance && ks_z.p_value >= kKsSignificance;
    r.passed += ok ? 1 : 0;
    rows.push_back({{"meet_rate", rate},
                    {"one_minus_tv", 1.0 - tv},
                    {"ks_x_p", ks_x.p_value},
                    {"ks_z_p", ks_z.p_value}});
  }
  r.details = {{"cases", rows}};
  return finish(std::move(r));
}

SuiteResult coupon_suite(const VerifyOptions& o) {
  constexpr std::array<std::size_t, 3> kSizes{4, 16, 64};
  constexpr std::array<double, 2> kEps{0.1, 0.01};
  SuiteResult r{"coupon_collector", "", kSizes.size() * kEps.size(), 0, {}};
  nlohmann::json rows = nlohmann::json::array();
  std::uint64_t salt = 0;
  for (const auto n : kSizes) {
    for (const double eps : kEps) {
      const auto m = coupon_collector_M(n, eps);
      const double exact = oracle::coupon_collector_tail(n, m);
      const auto exceeded = oracle::simulate_coupon_collector(n, m, o.trials, mix_seed(o.seed, ++salt));
      const double frac = static_cast<double>(exceeded) / static_cast<double>(o.trials);
      const double se = binomial_standard_error(exact, o.trials);
      const bool ok = exact <= eps / 2.0 && std::abs(frac - exact) <= 3.0 * se;
      r.passed += ok ? 1 : 0;
      rows.push_back({{"N", n}, {"epsilon", eps}, {"M", m}, {"exact_tail", exact},
                      {"simulated_tail", frac}});
    }
  }
  r.details = {{"cases", rows}};
  return finish(std::move(r));
}

} // namespace

VerifyReport verify_suite(const VerifyOptions& options) {
  using SuiteFn = SuiteResult (*)(const VerifyOptions&);
  static constexpr std::array<std::pair<const char*, SuiteFn>, 7> kSuites{{
      {"mass_lower_bound", mass_lower_bound_suite},
      {"truncated_tv_domination", truncated_tv_suite},
      {"normal_tv_bound", normal_tv_suite},
      {"per_site_noncoalescence_bound", per_site_suite},
      {"sampler_ks", sampler_ks_suite},
      {"max_coupling_marginals", coupling_suite},
      {"coupon_collector", coupon_suite},
  }};
  VerifyReport report;
  if (options.iterations == 0 || options.trials == 0) {
    report.status = "skipped";
    for (const auto& [name, fn] : kSuites) {
      report.suites.push_back({name, "skipped", 0, 0, {}});
    }
    return report;
  }
  report.suites = parallel_map_indexed(kSuites.size(), options.threads,
                                       [&](std::size_t k) { return kSuites[k].second(options); });
  const bool all = std::all_of(report.suites.begin(), report.suites.end(),
                               [](const SuiteResult& s) { return s.status == "pass"; });
  report.status = all ? "pass" : "fail";
  return report;
}

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : report.suites) {
    suites.push_back({{"name", s.name},
                      {"status", s.status},
                      {"cases", s.cases},
                      {"passed", s.passed},
                      {"details", s.details}});
  }
  return {{"status", report.status}, {"suites", std::move(suites)}};
}

} // namespace gibbs_tv::app
