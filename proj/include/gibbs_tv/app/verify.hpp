#pragma once

#include "gibbs_tv/bounds.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gibbs_tv::app {

struct VerifyOptions {
  std::uint64_t iterations = 1000; ///< randomized draws per inequality suite
  std::uint64_t trials = 100'000;  ///< Monte Carlo draws per sampling check
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Lemma-3 implementation under test; replaceable for mutation checks.
  std::function<MassLowerBound(double, double)> mass_lower_bound = truncated_mass_lower_bound;
};

struct SuiteResult {
  std::string name;
  std::string status; ///< "pass", "fail" or "skipped"
  std::uint64_t cases = 0;
  std::uint64_t passed = 0;
  nlohmann::json details;
};

struct VerifyReport {
  std::string status; ///< "pass", "fail" or "skipped"
  std::vector<SuiteResult> suites;
  bool ok() const { return status != "fail"; }
};

/// Randomized inequality checks (mass lower bound, truncated-TV domination,
/// normal-TV bound, per-site noncoalescence bound), KS tests of the sampler
/// and of both coupling marginals, and the coupon-collector comparison.
VerifyReport verify_suite(const VerifyOptions& options);

nlohmann::json to_json(const VerifyReport& report);

} // namespace gibbs_tv::app
