#include "gibbs_tv/app/experiments.hpp"

#include "gibbs_tv/app/observation_io.hpp"
#include "gibbs_tv/app/verify.hpp"
#include "gibbs_tv/coupling.hpp"
#include "gibbs_tv/oracle.hpp"
#include "gibbs_tv/parallel.hpp"
#include "gibbs_tv/rng.hpp"
#include "gibbs_tv/sampler.hpp"
#include "gibbs_tv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gibbs_tv::app {

namespace fs = std::filesystem;

namespace {

// Replicas advanced together by one worker in the contraction experiment.
constexpr std::size_t kContractionBlock = 256;
// Replica groups for the jackknife error of the fitted contraction rate.
constexpr std::size_t kJackknifeGroups = 20;

fs::path prepare_output(const ExperimentConfig& config, const std::string& name) {
  fs::create_directories(config.output_dir);
  return config.output_dir / name;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

double wasserstein_at(const Model& model, double eps) {
  if (model.graph.n_max() == 0) {
    return 0.0;
  }
  return wasserstein_mixing_time(model.graph.num_sites(), model.graph.n_max(),
                                 model.params.gamma, model.params.sigma, eps);
}

nlohmann::json model_json(const Model& model) {
  return {{"num_sites", model.graph.num_sites()},
          {"num_edges", model.graph.num_edges()},
          {"n_max", model.graph.n_max()},
          {"n_min", model.graph.n_min()},
          {"gamma", model.params.gamma},
          {"sigma", model.params.sigma}};
}

std::pair<std::vector<double>, std::vector<double>> initial_states(const ExperimentConfig& config,
                                                                   std::size_t n) {
  if (config.init == "extremal") {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
  }
  if (config.init == "identical") {
    return {std::vector<double>(n, 0.5), std::vector<double>(n, 0.5)};
  }
  throw std::invalid_argument("unknown init '" + config.init + "' (expected extremal or identical)");
}

nlohmann::json summary_json(const PairSummary& s) {
  return {{"t", s.t},
          {"mean_d", s.mean_weighted_d},
          {"se_d", s.se_weighted_d},
          {"mean_dhat", s.mean_taxicab},
          {"se_dhat", s.se_taxicab},
          {"frac_neq", s.noncoalesced_fraction},
          {"se_frac", s.se_noncoalesced}};
}

} // namespace

std::string render_bound_report(const BoundReport& r, double wasserstein_at_epsilon) {
  std::ostringstream out;
  out << "epsilon              " << fmt("%.6g", r.epsilon) << "\n";
  out << "theta_W(epsilon)     " << fmt("%.6f", wasserstein_at_epsilon) << "\n";
  out << "M                    " << r.M << "\n";
  out << "epsilon_tilde        " << fmt("%.10g", r.epsilon_tilde) << "\n";
  out << "zeta                 " << fmt("%.6f", r.zeta) << "\n";
  out << "zeta_safe            " << fmt("%.6f", r.zeta_safe)
      << (r.zeta_safe_warning ? "  (exceeds zeta)" : "") << "\n";
  out << "sigma_tilde^2        " << fmt("%.6f", r.sigma_tilde * r.sigma_tilde) << "\n";
  out << "omega                " << fmt("%.6e", r.omega) << "  (log " << fmt("%.6f", r.log_omega)
      << ")\n";
  out << "theta_W(omega^2)     " << fmt("%.6f", r.theta_wasserstein) << "\n";
  out << "tau                  " << r.tau << "\n";
  out << "total_time           " << fmt("%.6f", r.total_time) << "\n";
  out << "schedule tau + M     " << r.schedule_length() << "\n";
  if (r.decoupled) {
    out << "no edges: the synchronous phase is empty\n";
  }
  return out.str();
}

CommandResult run_bound(const ExperimentConfig& config) {
  const auto model = build_model(config);
  const auto report = tv_mixing_time(model.params, model.graph, config.epsilon);
  const double w = wasserstein_at(model, config.epsilon);

  CommandResult result;
  result.report = to_json(report);
  result.report["wasserstein_time_at_epsilon"] = w;
  result.report["model"] = model_json(model);
  result.summary = render_bound_report(report, w);

  const auto json_path = prepare_output(config, "bound.json");
  write_json(json_path, result.report);
  const auto text_path = config.output_dir / "bound.txt";
  write_text(text_path, result.summary);
  result.outputs = {json_path, text_path};
  return result;
}

CommandResult run_degrade(const ExperimentConfig& config) {
  if (config.input.empty()) {
    throw std::invalid_argument("degrade: no input image");
  }
  const auto image = read_pgm(config.input);
  SeededStream rng(config.seed, {StreamPurpose::Degrade, 0, 0});
  Observation obs{image.width, image.height, config.sigma, degrade(image.pixels, config.sigma, rng)};

  const auto obs_path = prepare_output(config, "observation.bin");
  write_observation(obs_path, obs);
  const auto preview_path = config.output_dir / "observation_preview.pgm";
  write_pgm(preview_path, PgmImage{obs.width, obs.height, obs.y});

  CommandResult result;
  result.report = {{"width", obs.width},
                   {"height", obs.height},
                   {"sigma", obs.sigma},
                   {"observation", obs_path.filename().string()},
                   {"preview", preview_path.filename().string()}};
  result.summary = "degraded " + std::to_string(obs.width) + "x" + std::to_string(obs.height) +
                   " image with sigma " + fmt("%.6g", obs.sigma) + "\n";
  result.outputs = {obs_path, preview_path};
  return result;
}

RestoreResult degrade_and_restore(const ExperimentConfig& config, std::size_t width,
                                  std::size_t height, const std::vector<double>* truth,
                                  const std::vector<double>* observed) {
  const std::size_t n = width * height;
  RestoreResult r;
  if (observed != nullptr) {
    r.y = *observed;
  } else if (truth != nullptr) {
    SeededStream rng(config.seed, {StreamPurpose::Degrade, 0, 0});
    r.y = degrade(*truth, config.sigma, rng);
  } else {
    throw std::invalid_argument("restore: neither an image nor an observation was given");
  }
  if (r.y.size() != n) {
    throw std::invalid_argument("restore: observation has " + std::to_string(r.y.size()) +
                                " values, expected " + std::to_string(n));
  }

  const auto graph = build_grid_graph(width, height, config.scheme);
  ModelParams params{config.gamma, config.sigma, r.y};
  params.validate(graph);

  r.bound = tv_mixing_time(params, graph, config.epsilon);
  r.recommended_steps = r.bound.schedule_length();
  r.burn_in = std::min(r.recommended_steps, config.max_steps);
  r.capped = r.burn_in < r.recommended_steps;
  r.average_steps = config.average_steps == 0 ? std::max<std::uint64_t>(r.burn_in, 1)
                                              : config.average_steps;

  ChainState init;
  init.x.resize(n);
  std::transform(r.y.begin(), r.y.end(), init.x.begin(),
                 [](double v) { return std::clamp(v, 0.0, 1.0); });
  SeededStream rng(config.seed, {StreamPurpose::Chain, 0, 0});
  const auto warm = run_chain(init, r.burn_in, params, graph, rng, 0);
  const auto sampled = run_chain(warm.final_state, r.average_steps, params, graph, rng, 0);

  r.restored = PgmImage{width, height, sampled.running_mean};
  return r;
}

CommandResult run_restore(const ExperimentConfig& config) {
  RestoreResult r;
  ExperimentConfig effective = config;
  if (!config.observation.empty()) {
    const auto obs = read_observation(config.observation);
    effective.sigma = obs.sigma;
    r = degrade_and_restore(effective, obs.width, obs.height, nullptr, &obs.y);
  } else if (!config.input.empty()) {
    const auto image = read_pgm(config.input);
    r = degrade_and_restore(effective, image.width, image.height, &image.pixels, nullptr);
  } else {
    throw std::invalid_argument("restore: set input (PGM) or observation");
  }

  const auto obs_path = prepare_output(config, "observation.bin");
  write_observation(obs_path, Observation{r.restored.width, r.restored.height, effective.sigma, r.y});
  const auto image_path = config.output_dir / "restored.pgm";
  write_pgm(image_path, r.restored);

  CommandResult result;
  result.report = {{"width", r.restored.width},
                   {"height", r.restored.height},
                   {"sigma", effective.sigma},
                   {"gamma", effective.gamma},
                   {"burn_in", r.burn_in},
                   {"average_steps", r.average_steps},
                   {"recommended_steps", r.recommended_steps},
                   {"capped", r.capped},
                   {"bound", to_json(r.bound)}};
  const auto diag_path = config.output_dir / "diagnostics.json";
  write_json(diag_path, result.report);
  result.summary = "restored " + std::to_string(r.restored.width) + "x" +
                   std::to_string(r.restored.height) + " image: burn-in " +
                   std::to_string(r.burn_in) + " steps (recommended " +
                   std::to_string(r.recommended_steps) + (r.capped ? ", capped" : "") +
                   "), averaged over " + std::to_string(r.average_steps) + " steps\n";
  result.outputs = {obs_path, image_path, diag_path};
  return result;
}

ContractionResult contraction_series(const ExperimentConfig& config, const Model& model) {
  const std::size_t n = model.graph.num_sites();
  auto [init_x, init_z] = initial_states(config, n);

  std::vector<CoupledPair> pairs;
  std::vector<SeededStream> streams;
  pairs.reserve(config.replicas);
  streams.reserve(config.replicas);
  for (std::uint64_t r = 0; r < config.replicas; ++r) {
    pairs.emplace_back(ChainState{init_x, 0}, ChainState{init_z, 0});
    streams.emplace_back(config.seed, StreamLabel{StreamPurpose::Contraction, r, 0});
  }

  // Replica r belongs to jackknife group r % groups; group sums of d per record.
  const std::size_t groups = std::min<std::size_t>(kJackknifeGroups, pairs.size());
  std::vector<std::vector<double>> group_sums;
  const auto record = [&](ContractionResult& out) {
    out.series.push_back(summarize_pairs(pairs, model.graph));
    std::vector<double> sums(groups, 0.0);
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      sums[r % groups] += weighted_l1(pairs[r].x().x, pairs[r].z().x, model.graph);
    }
    group_sums.push_back(std::move(sums));
  };

  ContractionResult out;
  out.theoretical_rate = wasserstein_contraction_rate(n, model.graph.n_max(), model.params.gamma,
                                                      model.params.sigma);
  record(out);

  const std::size_t blocks = (pairs.size() + kContractionBlock - 1) / kContractionBlock;
  const std::uint64_t stride = std::max<std::uint64_t>(config.record_every, 1);
  for (std::uint64_t t = 1; t <= config.steps; ++t) {
    parallel_map_indexed(blocks, config.threads, [&](std::size_t b) {
      const std::size_t end = std::min(pairs.size(), (b + 1) * kContractionBlock);
      for (std::size_t r = b * kContractionBlock; r < end; ++r) {
        coupled_gibbs_step(pairs[r], CouplingMode::Synchronous, model.params, model.graph,
                           streams[r]);
      }
      return 0;
    });
    if (t % stride == 0 || t == config.steps) {
      record(out);
    }
  }

  const bool identically_zero = std::all_of(out.series.begin(), out.series.end(),
                                            [](const PairSummary& s) { return s.mean_weighted_d == 0.0; });
  if (identically_zero) {
    out.verdict = "degenerate";
    return out;
  }
  // The fit assumes equally spaced times; drop a trailing off-stride point.
  std::span<const PairSummary> fit_span(out.series);
  if (config.steps % stride != 0) {
    fit_span = fit_span.first(fit_span.size() - 1);
  }
  auto fit = fit_decay_rate(fit_span);
  if (!fit) {
    out.verdict = "fail";
    return out;
  }

  // All recorded times share the same replicas, so the residual-based error
  // of the regression is too small. Jackknife over replica groups instead,
  // refitting each leave-one-group-out series on the same window.
  if (groups >= 2) {
    std::vector<std::size_t> group_size(groups, 0);
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      ++group_size[r % groups];
    }
    std::vector<double> rates;
    for (std::size_t g = 0; g < groups; ++g) {
      const double kept = static_cast<double>(pairs.size() - group_size[g]);
      std::vector<PairSummary> loo;
      for (std::size_t k = 0; k < fit->points; ++k) {
        double total = 0.0;
        for (const double v : group_sums[k]) {
          total += v;
        }
        PairSummary s;
        s.t = out.series[k].t;
        s.mean_weighted_d = (total - group_sums[k][g]) / kept;
        loo.push_back(s);
      }
      const auto f = fit_decay_rate(loo, 0.0);
      if (f && f->points == loo.size()) {
        rates.push_back(f->rate);
      }
    }
    if (rates.size() == groups) {
      double mean = 0.0;
      for (const double r : rates) {
        mean += r;
      }
      mean /= static_cast<double>(groups);
      double ss = 0.0;
      for (const double r : rates) {
        ss += (r - mean) * (r - mean);
      }
      const double g = static_cast<double>(groups);
      fit->rate_se = std::sqrt((g - 1.0) / g * ss);
    }
  }

  // Per-record rate to per-step rate.
  const double k = static_cast<double>(stride);
  fit->rate_se = fit->rate_se / (k * std::pow(fit->rate, (k - 1.0) / k));
  fit->rate = std::pow(fit->rate, 1.0 / k);
  out.verdict = fit->rate <= out.theoretical_rate + 2.0 * fit->rate_se ? "pass" : "fail";
  out.fit = fit;
  return out;
}

CommandResult run_contraction(const ExperimentConfig& config) {
  const auto model = build_model(config);
  const auto c = contraction_series(config, model);

  const auto csv_path = prepare_output(config, "contraction.csv");
  {
    auto out = open_output(csv_path);
    write_summary_csv_header(out);
    for (const auto& row : c.series) {
      append_summary_csv(out, row);
    }
  }

  CommandResult result;
  result.report = {{"model", model_json(model)},
                   {"replicas", config.replicas},
                   {"steps", config.steps},
                   {"init", config.init},
                   {"theoretical_rate", c.theoretical_rate},
                   {"verdict", c.verdict}};
  if (c.fit) {
    result.report["fit"] = {{"rate", c.fit->rate},
                            {"rate_se", c.fit->rate_se},
                            {"window_begin", c.fit->window_begin},
                            {"window_end", c.fit->window_end},
                            {"points", c.fit->points}};
  } else {
    result.report["fit"] = nullptr;
  }
  result.report["final"] = summary_json(c.series.back());
  const auto json_path = config.output_dir / "contraction.json";
  write_json(json_path, result.report);

  result.passed = c.verdict != "fail";
  result.summary = "contraction: theoretical rate " + fmt("%.6f", c.theoretical_rate);
  if (c.fit) {
    result.summary += ", fitted " + fmt("%.6f", c.fit->rate) + " +/- " + fmt("%.6f", c.fit->rate_se);
  }
  result.summary += " -> " + c.verdict + "\n";
  result.outputs = {csv_path, json_path};
  return result;
}

CommandResult run_certificate(const ExperimentConfig& config) {
  const auto model = build_model(config);
  const auto [init_x, init_z] = initial_states(config, model.graph.num_sites());
  OneShotOptions options;
  options.master_seed = config.seed;
  options.replicas = config.replicas;
  options.threads = config.threads;
  const auto report =
      one_shot_schedule(model.params, model.graph, config.epsilon, init_x, init_z, options);

  std::string verdict;
  if (!report.ci_usable) {
    verdict = "inconclusive";
  } else {
    verdict = report.ci_upper <= config.epsilon ? "pass" : "fail";
  }

  CommandResult result;
  result.report = to_json(report);
  result.report["model"] = model_json(model);
  result.report["starts"] = config.init;
  // Neither chain is drawn from equilibrium; two coupled copies stand in for it.
  result.report["surrogate"] = "coupled copies from fixed starts, not an equilibrium draw";
  result.report["verdict"] = verdict;
  result.passed = verdict != "fail";

  std::ostringstream text;
  text << render_bound_report(report.bound, wasserstein_at(model, config.epsilon));
  text << "replicas             " << report.replicas << "\n";
  text << "noncoalesced         " << report.noncoalesced_count << " ("
       << fmt("%.6f", report.noncoalesced_fraction) << ")\n";
  if (report.ci_usable) {
    text << "95% interval         [" << fmt("%.6f", report.ci_lower) << ", "
         << fmt("%.6f", report.ci_upper) << "]\n";
  } else {
    text << "95% interval         unusable (fewer than " << kMinReplicasForInterval
         << " replicas)\n";
  }
  text << "collector exceeded M " << report.coupon_time_exceeded_count << "\n";
  text << "comparison           coupled copies from " << config.init
       << " starts (surrogate for equilibrium)\n";
  text << "verdict              " << verdict << "\n";
  result.summary = text.str();

  const auto json_path = prepare_output(config, "certificate.json");
  write_json(json_path, result.report);
  const auto csv_path = config.output_dir / "coalescence.csv";
  write_coalescence_csv(csv_path, report);
  const auto text_path = config.output_dir / "certificate.txt";
  write_text(text_path, result.summary);
  result.outputs = {json_path, csv_path, text_path};
  return result;
}

CommandResult run_collector(const ExperimentConfig& config) {
  CommandResult result;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream text;
  std::uint64_t salt = 0;
  for (const auto n : config.collector_sizes) {
    for (const double eps : config.collector_epsilons) {
      const auto m = coupon_collector_M(n, eps);
      const double exact = oracle::coupon_collector_tail(n, m);
      const double recursive = oracle::coupon_collector_tail_recursive(n, m);
      const auto exceeded =
          oracle::simulate_coupon_collector(n, m, config.replicas, mix_seed(config.seed, ++salt));
      const double frac = static_cast<double>(exceeded) / static_cast<double>(config.replicas);
      const double se = binomial_standard_error(exact, config.replicas);
      const bool within_target = exact <= eps / 2.0;
      const bool simulation_agrees = std::abs(frac - exact) <= 3.0 * se;
      result.passed = result.passed && within_target && simulation_agrees;
      rows.push_back({{"N", n},
                      {"epsilon", eps},
                      {"M", m},
                      {"exact_tail", exact},
                      {"recursive_tail", recursive},
                      {"simulated_tail", frac},
                      {"standard_error", se},
                      {"within_target", within_target},
                      {"simulation_agrees", simulation_agrees}});
      text << "N=" << n << " eps=" << fmt("%g", eps) << " M=" << m
           << " exact=" << fmt("%.8f", exact) << " simulated=" << fmt("%.8f", frac)
           << (within_target && simulation_agrees ? " ok" : " FAIL") << "\n";
    }
  }
  result.report = {{"replicas", config.replicas},
                   {"cases", rows},
                   {"status", result.passed ? "pass" : "fail"}};
  result.summary = text.str();
  const auto json_path = prepare_output(config, "collector.json");
  write_json(json_path, result.report);
  result.outputs = {json_path};
  return result;
}

CommandResult run_verify(const ExperimentConfig& config) {
  VerifyOptions options;
  options.iterations = config.iterations;
  options.trials = config.trials;
  options.seed = config.seed;
  options.threads = config.threads;
  const auto report = verify_suite(options);

  CommandResult result;
  result.report = to_json(report);
  result.passed = report.ok();
  std::ostringstream text;
  for (const auto& s : report.suites) {
    text << s.name << ": " << s.passed << "/" << s.cases << " " << s.status << "\n";
  }
  text << "overall: " << report.status << "\n";
  result.summary = text.str();
  const auto json_path = prepare_output(config, "verify.json");
  write_json(json_path, result.report);
  result.outputs = {json_path};
  return result;
}

CommandResult run_command(const ExperimentConfig& config) {
  config.validate();
  switch (config.mode) {
  case Command::Bound:
    return run_bound(config);
  case Command::Degrade:
    return run_degrade(config);
  case Command::Restore:
    return run_restore(config);
  case Command::Contraction:
    return run_contraction(config);
  case Command::Certificate:
    return run_certificate(config);
  case Command::Collector:
    return run_collector(config);
  case Command::Verify:
    return run_verify(config);
  }
  throw std::logic_error("unhandled command");
}

} // namespace gibbs_tv::app
