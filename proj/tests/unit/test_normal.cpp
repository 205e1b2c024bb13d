#include "gibbs_tv/normal.hpp"
#include "gibbs_tv/rng.hpp"
#include "support/reference.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace gibbs_tv;

TEST_CASE("normal cdf and quantile") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(normal_upper_tail(10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
  for (double p : {1e-300, 1e-15, 1e-6, 0.02425, 0.3, 0.5, 0.7, 0.97575, 1 - 1e-6, 1 - 1e-15}) {
    const double z = normal_quantile(p);
    const double back = p < 0.5 ? normal_cdf(z) : 1.0 - normal_upper_tail(z);
    CHECK(back == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("log upper tail stays finite deep in the tail") {
  for (double z : {-5.0, 0.0, 3.0, 20.0, 34.0, 36.0, 50.0, 1e3}) {
    const double lt = log_normal_upper_tail(z);
    CHECK(std::isfinite(lt));
    if (z < 30.0) {
      CHECK(lt == doctest::Approx(std::log(0.5 * std::erfc(z / std::sqrt(2.0)))).epsilon(1e-12));
    }
    CHECK(inverse_log_normal_upper_tail(lt) == doctest::Approx(z).epsilon(1e-10));
  }
  // Continuity across the switch to the asymptotic series.
  CHECK(log_normal_upper_tail(35.0 - 1e-9) == doctest::Approx(log_normal_upper_tail(35.0 + 1e-9)).epsilon(1e-9));
}

TEST_CASE("truncated normal median example") {
  const TruncatedNormal tn(0.8333333333333334, 1.0 / 3.0);
  CHECK(tn.quantile(0.5) == doctest::Approx(ref::kMedianExample).epsilon(1e-9));
  CHECK(tn.mass() == doctest::Approx(ref::kMassExample).epsilon(1e-9));
}

TEST_CASE("truncated cdf/quantile round trip") {
  SeededStream rng(11, {StreamPurpose::Test, 0, 0});
  double worst = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double m = -3.0 + 7.0 * rng.uniform_open();
    const double v = std::exp(-9.0 + 11.0 * rng.uniform_open());
    const double u = rng.uniform_open();
    const TruncatedNormal tn(m, v);
    const double x = tn.quantile(u);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    worst = std::max(worst, std::abs(tn.cdf(x) - u));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("extreme truncation stays accurate") {
  // Both endpoints far in one tail: the conditioned law is nearly exponential.
  const TruncatedNormal left(-40.0, 1.0);
  CHECK(std::isfinite(left.log_mass()));
  CHECK(left.quantile(0.5) == doctest::Approx(std::log(2.0) / 40.0).epsilon(2e-3));
  const TruncatedNormal right(41.0, 1.0);
  CHECK(right.quantile(0.5) == doctest::Approx(1.0 - std::log(2.0) / 40.0).epsilon(2e-3));
  CHECK(right.cdf(right.quantile(0.25)) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("truncated normal agrees with a direct formula in the bulk") {
  for (double m : {-0.5, 0.2, 0.5, 1.3}) {
    for (double v : {0.05, 0.4, 3.0}) {
      const TruncatedNormal tn(m, v);
      for (double x : {0.1, 0.5, 0.9}) {
        CHECK(tn.cdf(x) == doctest::Approx(ref::truncated_cdf(m, v, x)).epsilon(1e-11));
      }
      CHECK(tn.pdf(-0.1) == 0.0);
      CHECK(tn.pdf(1.1) == 0.0);
    }
  }
}

TEST_CASE("quantile domain errors") {
  const TruncatedNormal tn(0.5, 1.0);
  CHECK_THROWS_AS(tn.quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(tn.quantile(1.0), std::domain_error);
  CHECK(tn.quantile(1e-300) >= 0.0);
  CHECK(tn.quantile(1.0 - 1e-16) <= 1.0);
}
