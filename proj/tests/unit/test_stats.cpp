#include "gibbs_tv/rng.hpp"
#include "gibbs_tv/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace gibbs_tv;

TEST_CASE("wilson interval") {
  const auto zero = wilson_interval(0, 10, 0.95);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.lower == doctest::Approx(0.0).epsilon(1e-12));
  const double z2 = 1.959963984540054 * 1.959963984540054;
  CHECK(zero.upper == doctest::Approx(z2 / (10 + z2)).epsilon(1e-10));
  const auto half = wilson_interval(50, 100, 0.95);
  CHECK(half.lower == doctest::Approx(0.4038315).epsilon(1e-6));
  CHECK(half.upper == doctest::Approx(0.5961685).epsilon(1e-6));
  CHECK(half.half_width() == doctest::Approx(0.0961685).epsilon(1e-6));
  CHECK_THROWS(wilson_interval(3, 0, 0.95));
  CHECK_THROWS(wilson_interval(5, 3, 0.95));
}

TEST_CASE("binomial se and mean/error") {
  CHECK(binomial_standard_error(0.5, 100) == doctest::Approx(0.05));
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto me = mean_and_error(v);
  CHECK(me.mean == 2.5);
  CHECK(me.standard_error == doctest::Approx(std::sqrt(1.6666666666666667 / 4.0)));
}

TEST_CASE("kolmogorov distribution") {
  CHECK(kolmogorov_survival(1.3580986393225507) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(kolmogorov_survival(0.1) == 1.0);
  CHECK(kolmogorov_survival(5.0) < 1e-20);
  SeededStream rng(1, {StreamPurpose::Test, 0, 0});
  std::vector<double> u(20000);
  for (auto& x : u) {
    x = rng.uniform_open();
  }
  CHECK(ks_test(u, [](double x) { return x; }).p_value > 0.001);
  std::vector<double> shifted = u;
  for (auto& x : shifted) {
    x = x * x;
  }
  CHECK(ks_test(shifted, [](double x) { return x; }).p_value < 1e-10);
}

TEST_CASE("chi-square") {
  CHECK(chi_square_survival(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chi_square_survival(18.307038053275146, 10.0) == doctest::Approx(0.05).epsilon(1e-10));
  const std::vector<std::uint64_t> fair{250, 260, 240, 250};
  const std::vector<double> p(4, 0.25);
  const auto r = chi_square_test(fair, p);
  CHECK(r.statistic == doctest::Approx(0.8));
  CHECK(r.dof == 3.0);
  CHECK(r.p_value > 0.5);
  // small cells are pooled
  const std::vector<std::uint64_t> obs{100, 98, 1, 1};
  const std::vector<double> q{0.495, 0.495, 0.005, 0.005};
  CHECK(chi_square_test(obs, q).dof == 2.0);
}
