#include "gibbs_tv/model.hpp"
#include "gibbs_tv/rng.hpp"
#include "support/reference.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace gibbs_tv;

namespace {
ModelParams constant_y(double gamma, double sigma, double y, std::size_t n) {
  return {gamma, sigma, std::vector<double>(n, y)};
}
} // namespace

TEST_CASE("full conditional examples") {
  const auto g3 = build_grid_graph(3, 3, Neighborhood::N4);
  {
    auto p = constant_y(0.0, 2.0, 0.3, 9);
    const std::vector<double> x(9, 0.9);
    const auto fc = full_conditional(p, g3, x, 4);
    CHECK(fc.mean == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(fc.variance == doctest::Approx(4.0).epsilon(1e-15));
  }
  {
    // centre site: four neighbours summing to 2
    auto p = constant_y(1.0, 1.0, 0.5, 9);
    const std::vector<double> x{0, 0.5, 0, 0.5, 0.9, 0.5, 0, 0.5, 0};
    const auto fc = full_conditional(p, g3, x, 4);
    CHECK(fc.mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fc.variance == doctest::Approx(0.2).epsilon(1e-15));
  }
  {
    const auto g2 = build_grid_graph(2, 2, Neighborhood::N4);
    auto p = constant_y(1.0, 1.0, 0.5, 4);
    const std::vector<double> x{0.1, 0.5, 0.5, 0.2};
    const auto fc = full_conditional(p, g2, x, 0);
    CHECK(fc.mean == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(fc.variance == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("log density examples") {
  const auto g = build_grid_graph(3, 1, Neighborhood::N4);
  auto p = constant_y(1.3, 0.7, 0.2, 3);
  const std::vector<double> flat(3, 0.4);
  CHECK(log_density_unnormalized(p, g, flat, false) == 0.0);
  const std::vector<double> outside{0.1, 1.5, 0.2};
  CHECK(log_density_unnormalized(p, g, outside, false) == -std::numeric_limits<double>::infinity());
  CHECK(log_density_unnormalized(p, g, outside, true) == -std::numeric_limits<double>::infinity());
  const std::vector<double> short_x{0.1};
  CHECK_THROWS(log_density_unnormalized(p, g, short_x, true));

  const std::vector<Edge> e{{0, 1}};
  const auto path = build_custom_graph(e, 2);
  ModelParams q{1.0, 1.0, {0.0, 0.0}};
  const std::vector<double> x{0.0, 1.0};
  CHECK(log_density_unnormalized(q, path, x, true) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("conditional mean is the coordinate-wise stationary point") {
  const auto g = build_grid_graph(3, 3, Neighborhood::N8);
  SeededStream rng(5, {StreamPurpose::Test, 0, 0});
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams p{0.2 + rng.uniform_open(), 0.5 + rng.uniform_open(), std::vector<double>(9)};
    std::vector<double> x(9);
    for (std::size_t i = 0; i < 9; ++i) {
      p.y[i] = rng.uniform_open();
      x[i] = rng.uniform_open();
    }
    const SiteIndex i = rng.uniform_index(9);
    const auto fc = full_conditional(p, g, x, i);
    REQUIRE(fc.mean > 1e-3);
    REQUIRE(fc.mean < 1 - 1e-3);
    x[i] = fc.mean;
    const double h = 1e-6;
    auto xp = x;
    auto xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double deriv =
        (log_density_unnormalized(p, g, xp, true) - log_density_unnormalized(p, g, xm, true)) / (2 * h);
    CHECK(std::abs(deriv) < 1e-6);
    // the curvature is minus the conditional precision
    const double curv = (log_density_unnormalized(p, g, xp, true) - 2 * log_density_unnormalized(p, g, x, true) +
                         log_density_unnormalized(p, g, xm, true)) / (h * h);
    CHECK(curv == doctest::Approx(-1.0 / fc.variance).epsilon(1e-3));
  }
}

TEST_CASE("likelihood term depends only on the squared residual") {
  const auto g = build_grid_graph(2, 2, Neighborhood::N4);
  ModelParams p{0.9, 0.8, {0.1, 0.4, 0.6, 0.9}};
  const std::vector<double> a{0.1, 0.4, 0.6, 0.9};
  const std::vector<double> b{0.9, 0.8, 0.2, 0.5}; // same residual norm after permutation of signs
  auto lik = [&](const std::vector<double>& x) {
    return log_density_unnormalized(p, g, x, true) - log_density_unnormalized(p, g, x, false);
  };
  CHECK(lik(a) == 0.0);
  double rss = 0.0;
  for (int i = 0; i < 4; ++i) {
    rss += (b[i] - p.y[i]) * (b[i] - p.y[i]);
  }
  CHECK(lik(b) == doctest::Approx(-rss / (2 * 0.64)).epsilon(1e-14));
}

TEST_CASE("thermo constants") {
  const auto g = build_grid_graph(2, 2, Neighborhood::N4);
  const auto c = thermo_constants(constant_y(1.0, 1.0, 0.5, 4), g);
  for (int i = 0; i < 4; ++i) {
    CHECK(c.zeta_i[i] == doctest::Approx(ref::kZeta).epsilon(1e-15));
    CHECK(c.sigma_tilde_sq_i[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  CHECK(c.zeta == doctest::Approx(ref::kZeta).epsilon(1e-15));
  CHECK(c.sigma_tilde * c.sigma_tilde == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const auto zero = thermo_constants(constant_y(1.0, 1.0, 0.0, 4), g);
  CHECK(zero.zeta == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  ModelParams decoupled{0.0, 0.7, {0.1, -0.4, 0.3, 1.2}};
  const auto d = thermo_constants(decoupled, g);
  for (int i = 0; i < 4; ++i) {
    CHECK(d.zeta_i[i] == doctest::Approx(decoupled.y[i]).epsilon(1e-15));
    CHECK(d.sigma_tilde_sq_i[i] == doctest::Approx(0.49).epsilon(1e-15));
  }
  CHECK(d.zeta == doctest::Approx(1.2));

  // Strongly negative y: the conditional mean at an all-zero neighbourhood
  // exceeds max |zeta_i| in magnitude.
  ModelParams negative{1.0, 1.0, {-5.0, 0.5, 0.5, 0.5}};
  const auto n = thermo_constants(negative, g);
  CHECK(n.zeta_safe > n.zeta);
}

TEST_CASE("constants are invariant under graph automorphisms") {
  const auto g = build_grid_graph(3, 3, Neighborhood::N4);
  ModelParams p{0.7, 0.9, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.95}};
  // reflection x -> 2 - x on a 3x3 grid
  ModelParams q = p;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      q.y[r * 3 + c] = p.y[r * 3 + (2 - c)];
    }
  }
  const auto a = thermo_constants(p, g);
  const auto b = thermo_constants(q, g);
  CHECK(a.zeta == doctest::Approx(b.zeta).epsilon(1e-15));
  CHECK(a.sigma_tilde == doctest::Approx(b.sigma_tilde).epsilon(1e-15));
}

TEST_CASE("parameter validation and json") {
  const auto g = build_grid_graph(2, 1, Neighborhood::N4);
  CHECK_THROWS(ModelParams{1.0, 0.0, {0.1, 0.2}}.validate(g));
  CHECK_THROWS(ModelParams{-1.0, 1.0, {0.1, 0.2}}.validate(g));
  CHECK_THROWS(ModelParams{1.0, 1.0, {0.1}}.validate(g));
  const ModelParams p{0.5, 2.0, {-0.25, 1.75}};
  const auto back = params_from_json(params_to_json(p));
  CHECK(back.gamma == p.gamma);
  CHECK(back.sigma == p.sigma);
  CHECK(back.y == p.y);
}
