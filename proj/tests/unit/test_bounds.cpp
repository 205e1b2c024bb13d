#include "gibbs_tv/bounds.hpp"
#include "gibbs_tv/rng.hpp"
#include "support/reference.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace gibbs_tv;

namespace {
struct Grid2 {
  NeighborhoodGraph graph = build_grid_graph(2, 2, Neighborhood::N4);
  ModelParams params{1.0, 1.0, std::vector<double>(4, 0.5)};
};
} // namespace

TEST_CASE("wasserstein mixing time") {
  CHECK(wasserstein_mixing_time(4, 2, 1.0, 1.0, 0.1) == doctest::Approx(ref::kThetaW01).epsilon(1e-10));
  CHECK(wasserstein_mixing_time(4, 2, 1.0, 1.0, 8.0) == 0.0);
  CHECK(wasserstein_mixing_time(4, 2, 1.0, 1.0, 9.0) == 0.0);
  CHECK(wasserstein_mixing_time(4, 2, 1.0, 1.0, 7.999) > 0.0);
  CHECK(wasserstein_mixing_time(4, 2, 0.0, 1.0, 0.1) ==
        doctest::Approx(std::log(0.1 / 8.0) / std::log(0.75)).epsilon(1e-13));
  CHECK_THROWS(wasserstein_mixing_time(4, 0, 1.0, 1.0, 0.1));
  CHECK(wasserstein_contraction_rate(4, 2, 1.0, 1.0) == doctest::Approx(11.0 / 12.0).epsilon(1e-15));
  CHECK(wasserstein_mixing_time_log(4, 2, 1.0, 1.0, std::log(0.1)) ==
        doctest::Approx(ref::kThetaW01).epsilon(1e-10));
}

TEST_CASE("coupon collector M") {
  CHECK(coupon_collector_M(1, 0.1) == 3);
  CHECK(coupon_collector_M(4, 0.1) == ref::kM);
  CHECK(coupon_collector_M(4, std::nextafter(2.0, 0.0)) == 6);
  CHECK(coupon_collector_M(1, 1.999) >= 1);
  CHECK_THROWS(coupon_collector_M(4, 2.0));
  CHECK_THROWS(coupon_collector_M(4, 0.0));
}

TEST_CASE("tv mixing time golden chain") {
  Grid2 g;
  const auto r = tv_mixing_time(g.params, g.graph, 0.1);
  CHECK(r.M == ref::kM);
  CHECK(r.epsilon_tilde == doctest::Approx(ref::kEpsTilde).epsilon(1e-9));
  CHECK(r.zeta == doctest::Approx(ref::kZeta).epsilon(1e-12));
  CHECK(r.sigma_tilde * r.sigma_tilde == doctest::Approx(ref::kSigmaTildeSq).epsilon(1e-12));
  CHECK(std::exp(r.log_exp_factor) == doctest::Approx(ref::kExpFactor).epsilon(1e-9));
  CHECK(r.omega == doctest::Approx(ref::kOmega).epsilon(1e-8));
  CHECK(r.theta_wasserstein == doctest::Approx(ref::kThetaOmegaSq).epsilon(1e-9));
  CHECK(r.total_time == doctest::Approx(ref::kTotalTime).epsilon(1e-9));
  CHECK(r.tau == 275);
  CHECK(r.schedule_length() == 293);
  CHECK_FALSE(r.zeta_safe_warning);
  CHECK_FALSE(r.decoupled);
  // report invariants
  CHECK(r.epsilon_tilde > 0.0);
  CHECK(r.epsilon_tilde < 1.0);
  CHECK(r.omega > 0.0);
  CHECK(r.omega < r.epsilon_tilde);
  CHECK(r.total_time >= static_cast<double>(r.M));
}

TEST_CASE("tv mixing time is monotone in epsilon and defined when decoupled") {
  Grid2 g;
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.01, 0.05, 0.1, 0.2, 0.5, 0.9}) {
    const double t = tv_mixing_time(g.params, g.graph, eps).total_time;
    CHECK(t < prev);
    prev = t;
  }
  g.params.gamma = 0.0;
  const auto d = tv_mixing_time(g.params, g.graph, 0.1);
  CHECK(std::isfinite(d.total_time));
  CHECK(d.zeta == doctest::Approx(0.5));
  CHECK(d.sigma_tilde == doctest::Approx(1.0));

  const auto lone = build_grid_graph(1, 1, Neighborhood::N4);
  const auto one = tv_mixing_time(ModelParams{1.0, 1.0, {0.5}}, lone, 0.1);
  CHECK(one.decoupled);
  CHECK(one.theta_wasserstein == 0.0);
  CHECK(one.M == 3);

  CHECK_THROWS(tv_mixing_time(g.params, g.graph, 0.0));
  CHECK_THROWS(tv_mixing_time(g.params, g.graph, 1.0));
}

TEST_CASE("sharp models do not overflow") {
  const auto graph = build_grid_graph(8, 8, Neighborhood::N8);
  ModelParams p{3.0, 0.05, std::vector<double>(64, 0.9)};
  const auto r = tv_mixing_time(p, graph, 0.05);
  CHECK(std::isfinite(r.log_omega));
  CHECK(std::isfinite(r.log_exp_factor));
  CHECK(std::isfinite(r.total_time));
  CHECK(r.log_exp_factor > 710.0); // exp would overflow
  CHECK(r.total_time > 0.0);
  CHECK(std::isfinite(to_json(r)["total_time"].get<double>()));
}

TEST_CASE("zeta_safe warning") {
  Grid2 g;
  g.params.y = {-5.0, 0.5, 0.5, 0.5};
  CHECK(tv_mixing_time(g.params, g.graph, 0.1).zeta_safe_warning);
}

TEST_CASE("normal tv") {
  const auto same = normal_tv(0.3, 0.3, 2.0);
  CHECK(same.exact == 0.0);
  CHECK(same.bound == 0.0);
  const auto ex = normal_tv(0.0, 0.2, 1.0);
  CHECK(ex.exact == doctest::Approx(ref::kNormalTvExact).epsilon(1e-9));
  CHECK(ex.bound == doctest::Approx(ref::kNormalTvBound).epsilon(1e-9));
  const auto far = normal_tv(0.0, 100.0, 1.0);
  CHECK(far.exact == doctest::Approx(1.0));
  CHECK(far.bound > 39.0);
  SeededStream rng(2, {StreamPurpose::Test, 0, 0});
  for (int k = 0; k < 10000; ++k) {
    const auto t = normal_tv(-2 + 5 * rng.uniform_open(), -2 + 5 * rng.uniform_open(),
                             0.1 + 3 * rng.uniform_open());
    REQUIRE(t.exact <= t.bound);
  }
}

TEST_CASE("truncated tv bound") {
  CHECK(truncated_tv_bound(0.0, 0.5, 0.8) == 0.0);
  CHECK(truncated_tv_bound(0.1, 0.5, 0.8) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS(truncated_tv_bound(0.1, 0.0, 0.8));
}

TEST_CASE("mass lower bound") {
  const auto ex = truncated_mass_lower_bound(0.8333333333333334, 1.0 / 3.0);
  CHECK(ex.mass == doctest::Approx(ref::kMassExample).epsilon(1e-9));
  CHECK(ex.lower_bound == doctest::Approx(ref::kMassLowerExample).epsilon(1e-9));
  const auto sharp = truncated_mass_lower_bound(0.5, 1e-6);
  CHECK(sharp.mass == doctest::Approx(1.0));
  CHECK(sharp.lower_bound < 1e-100);
  const auto far = truncated_mass_lower_bound(-5.0, 1.0);
  CHECK(far.mass < 1e-5);
  CHECK(far.mass >= far.lower_bound);
  SeededStream rng(3, {StreamPurpose::Test, 0, 0});
  for (int k = 0; k < 10000; ++k) {
    const auto m = truncated_mass_lower_bound(-6 + 12 * rng.uniform_open(), 0.001 + 10 * rng.uniform_open());
    REQUIRE(m.mass >= m.lower_bound);
  }
}

TEST_CASE("per-site noncoalescence bound") {
  CHECK(per_site_noncoalescence_bound(0.8333333333333334, 1.0 / 3.0, 1.0, 0.0) == 0.0);
  CHECK(per_site_noncoalescence_bound(0.8333333333333334, 1.0 / 3.0, 1.0, 0.1) ==
        doctest::Approx(ref::kPerSiteExample).epsilon(1e-9));
  CHECK(per_site_noncoalescence_bound(0.8333333333333334, 1.0 / 3.0, 0.0, 0.7) == 0.0);
}
