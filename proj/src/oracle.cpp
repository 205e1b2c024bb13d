#include "gibbs_tv/oracle.hpp"

#include "gibbs_tv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gibbs_tv::oracle {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double upper_tail(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

struct LogDensity {
  double mean;
  double variance;
  double log_norm; // log(sqrt(2 pi variance) * mass)

  double operator()(double x) const {
    const double r = x - mean;
    return -r * r / (2.0 * variance) - log_norm;
  }
};

LogDensity truncated_log_density(const FullConditional& fc) {
  const double mass = normal_mass_on_unit_interval(fc.mean, fc.variance);
  if (!(mass > 0.0)) {
    throw std::domain_error("oracle: truncated mass underflows");
  }
  return {fc.mean, fc.variance,
          0.5 * std::log(2.0 * std::numbers::pi * fc.variance) + std::log(mass)};
}

double simpson(double fa, double fm, double fb, double h) { return h / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Composite Simpson on `panels` equal panels of [a, b], each refined adaptively.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels, double tolerance) {
  if (!(b > a)) {
    return 0.0;
  }
  const double h = (b - a) / static_cast<double>(panels);
  const double panel_tol = tolerance / static_cast<double>(panels);
  double total = 0.0;
  double fa = f(a);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = k + 1 == panels ? b : lo + h;
    const double fm = f(0.5 * (lo + hi));
    const double fb = f(hi);
    total += adaptive_simpson(f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, hi - lo), panel_tol, 30);
    fa = fb;
  }
  return total;
}

// Real roots in (lo, hi) of a x^2 + b x + c.
std::vector<double> quadratic_roots_in(double a, double b, double c, double lo, double hi) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) {
    return roots;
  }
  if (std::abs(a) <= 1e-14 * scale) {
    if (b != 0.0) {
      roots.push_back(-c / b);
    }
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0.0) {
        roots.push_back(q / a);
        roots.push_back(c / q);
      } else {
        roots.push_back(0.0);
      }
    }
  }
  std::erase_if(roots, [&](double r) { return !(r > lo && r < hi); });
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> breakpoints(double lo, double hi, std::vector<double> interior) {
  std::vector<double> pts{lo};
  pts.insert(pts.end(), interior.begin(), interior.end());
  pts.push_back(hi);
  return pts;
}

} // namespace

double normal_mass_on_interval(double mean, double variance, double lo, double hi) {
  if (!(variance > 0.0)) {
    throw std::domain_error("oracle: variance must be positive");
  }
  if (!(hi > lo)) {
    return 0.0;
  }
  const double sd = std::sqrt(variance);
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  if (a >= 0.0) {
    return upper_tail(a) - upper_tail(b);
  }
  if (b <= 0.0) {
    return upper_tail(-b) - upper_tail(-a);
  }
  return 1.0 - upper_tail(b) - upper_tail(-a);
}

double truncated_cdf(double mean, double variance, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  return normal_mass_on_interval(mean, variance, 0.0, x) /
         normal_mass_on_unit_interval(mean, variance);
}

double numeric_tv_truncated(const FullConditional& fc1, const FullConditional& fc2,
                            std::size_t grid_points, double tolerance) {
  if (grid_points == 0) {
    throw std::invalid_argument("numeric_tv_truncated: grid_points must be positive");
  }
  const auto lf = truncated_log_density(fc1);
  const auto lg = truncated_log_density(fc2);
  // log f - log g = A x^2 + B x + C
  const double qa = -0.5 / fc1.variance + 0.5 / fc2.variance;
  const double qb = fc1.mean / fc1.variance - fc2.mean / fc2.variance;
  const double qc = -fc1.mean * fc1.mean / (2.0 * fc1.variance) +
                    fc2.mean * fc2.mean / (2.0 * fc2.variance) - lf.log_norm + lg.log_norm;
  const auto pts = breakpoints(0.0, 1.0, quadratic_roots_in(qa, qb, qc, 0.0, 1.0));
  const std::function<double(double)> diff = [&](double x) {
    return std::abs(std::exp(lf(x)) - std::exp(lg(x)));
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    total += integrate(diff, pts[k], pts[k + 1], grid_points, tolerance);
  }
  return 0.5 * total;
}

double numeric_tv_normal(double mu1, double mu2, double sigma, std::size_t grid_points,
                         double tolerance) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("numeric_tv_normal: sigma must be positive");
  }
  if (mu1 == mu2) {
    return 0.0;
  }
  const double lo = std::min(mu1, mu2) - 40.0 * sigma;
  const double hi = std::max(mu1, mu2) + 40.0 * sigma;
  const double mid = 0.5 * (mu1 + mu2);
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  const std::function<double(double)> diff = [&](double x) {
    const double r1 = (x - mu1) / sigma;
    const double r2 = (x - mu2) / sigma;
    return std::abs(norm * (std::exp(-0.5 * r1 * r1) - std::exp(-0.5 * r2 * r2)));
  };
  return 0.5 * (integrate(diff, lo, mid, grid_points, tolerance) +
                integrate(diff, mid, hi, grid_points, tolerance));
}

double coupon_collector_tail_recursive(std::size_t num_coupons, std::uint64_t draws) {
  if (num_coupons == 0) {
    throw std::invalid_argument("coupon collector needs at least one coupon");
  }
  const double n = static_cast<double>(num_coupons);
  // p[j] = P[j distinct coupons after the draws so far]
  std::vector<double> p(num_coupons + 1, 0.0);
  p[0] = 1.0;
  for (std::uint64_t m = 0; m < draws; ++m) {
    for (std::size_t j = num_coupons; j > 0; --j) {
      p[j] = p[j] * (static_cast<double>(j) / n) +
             p[j - 1] * (static_cast<double>(num_coupons - j + 1) / n);
    }
    p[0] = 0.0;
    if (p[num_coupons] == 1.0) {
      break;
    }
  }
  double incomplete = 0.0;
  for (std::size_t j = 0; j < num_coupons; ++j) {
    incomplete += p[j];
  }
  return incomplete;
}

double coupon_collector_tail(std::size_t num_coupons, std::uint64_t draws) {
  if (num_coupons == 0) {
    throw std::invalid_argument("coupon collector needs at least one coupon");
  }
  if (num_coupons == 1) {
    return draws >= 1 ? 0.0 : 1.0;
  }
  if (draws == 0) {
    return 1.0;
  }
  const auto n = static_cast<long double>(num_coupons);
  const long double log_n_fact = std::lgamma(n + 1.0L);
  long double sum = 0.0L;
  long double largest = 0.0L;
  for (std::size_t k = 1; k < num_coupons; ++k) {
    const auto kk = static_cast<long double>(k);
    long double log_binom;
    if (num_coupons > 30) {
      log_binom = log_n_fact - std::lgamma(kk + 1.0L) - std::lgamma(n - kk + 1.0L);
    } else {
      long double c = 1.0L;
      for (std::size_t j = 1; j <= k; ++j) {
        c = c * static_cast<long double>(num_coupons - k + j) / static_cast<long double>(j);
      }
      log_binom = std::log(c);
    }
    const long double term =
        std::exp(log_binom + static_cast<long double>(draws) * std::log1p(-kk / n));
    largest = std::max(largest, term);
    sum += (k % 2 == 1) ? term : -term;
  }
  // Relative cancellation beyond ~1e-8 of the long double budget: recompute.
  if (largest > 1e8L * std::max(std::abs(sum), 1e-300L)) {
    return coupon_collector_tail_recursive(num_coupons, draws);
  }
  return static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
}

std::uint64_t simulate_coupon_collector(std::size_t num_coupons, std::uint64_t draws,
                                        std::uint64_t replicas, std::uint64_t master_seed) {
  std::uint64_t exceeded = 0;
  std::vector<std::uint8_t> seen(num_coupons);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    SeededStream rng(master_seed, {StreamPurpose::Collector, r, 0});
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t count = 0;
    for (std::uint64_t m = 0; m < draws && count < num_coupons; ++m) {
      const auto c = rng.uniform_index(num_coupons);
      if (!seen[c]) {
        seen[c] = 1;
        ++count;
      }
    }
    exceeded += count < num_coupons ? 1 : 0;
  }
  return exceeded;
}

DiscretizedChain::DiscretizedChain(const ModelParams& params, const NeighborhoodGraph& graph,
                                   std::size_t levels)
    : num_sites_(graph.num_sites()), levels_(levels) {
  params.validate(graph);
  if (num_sites_ > kMaxSites) {
    throw std::invalid_argument("discretized chain supports at most " +
                                std::to_string(kMaxSites) + " sites");
  }
  if (levels_ < 2) {
    throw std::invalid_argument("discretized chain needs at least two levels");
  }
  num_states_ = 1;
  stride_.resize(num_sites_);
  for (std::size_t i = 0; i < num_sites_; ++i) {
    stride_[i] = num_states_;
    if (num_states_ > kMaxStates / levels_) {
      throw std::invalid_argument("discretized state space exceeds " +
                                  std::to_string(kMaxStates) + " states");
    }
    num_states_ *= levels_;
  }
  const double inv_noise = 1.0 / (params.sigma * params.sigma);
  const double g2 = params.gamma * params.gamma;
  const double l = static_cast<double>(levels_);
  neighbors_.resize(num_sites_);
  conditional_.resize(num_sites_);
  for (SiteIndex i = 0; i < num_sites_; ++i) {
    const auto nb = graph.neighbors(i);
    neighbors_[i].assign(nb.begin(), nb.end());
    const std::size_t deg = nb.size();
    const double variance = 1.0 / (inv_noise + static_cast<double>(deg) * g2);
    const double sd = std::sqrt(variance);
    const std::size_t sums = deg * (levels_ - 1) + 1;
    auto& table = conditional_[i];
    table.resize(sums * levels_);
    for (std::size_t s = 0; s < sums; ++s) {
      // Sum of midpoints (c_j + 1/2)/L over the neighbours.
      const double neighbor_sum = (static_cast<double>(s) + 0.5 * static_cast<double>(deg)) / l;
      const double mean = variance * (inv_noise * params.y[i] + g2 * neighbor_sum);
      const double a = (0.0 - mean) / sd;
      // Cell probabilities from differences of the normal CDF, oriented so
      // the differences are taken in the thinner tail.
      const bool use_upper = mean < 0.5;
      double prev = use_upper ? upper_tail(a) : upper_tail(-a);
      double total = 0.0;
      for (std::size_t c = 0; c < levels_; ++c) {
        const double edge = (static_cast<double>(c) + 1.0) / l;
        const double z = (edge - mean) / sd;
        const double cur = use_upper ? upper_tail(z) : upper_tail(-z);
        const double p = use_upper ? prev - cur : cur - prev;
        table[s * levels_ + c] = p;
        total += p;
        prev = cur;
      }
      if (!(total > 0.0)) {
        throw std::domain_error("discretized chain: conditional mass underflows");
      }
      for (std::size_t c = 0; c < levels_; ++c) {
        table[s * levels_ + c] /= total;
      }
    }
  }
}

std::span<const double> DiscretizedChain::cell_probabilities(SiteIndex i,
                                                             std::size_t neighbor_cell_sum) const {
  return std::span<const double>(conditional_.at(i)).subspan(neighbor_cell_sum * levels_,
                                                              levels_);
}

std::size_t DiscretizedChain::encode(std::span<const double> x) const {
  if (x.size() != num_sites_) {
    throw std::invalid_argument("discretized chain: state length mismatch");
  }
  std::size_t s = 0;
  for (std::size_t i = 0; i < num_sites_; ++i) {
    const auto cell = static_cast<std::size_t>(
        std::clamp(std::floor(x[i] * static_cast<double>(levels_)), 0.0,
                   static_cast<double>(levels_ - 1)));
    s += cell * stride_[i];
  }
  return s;
}

std::vector<std::size_t> DiscretizedChain::decode(std::size_t state) const {
  std::vector<std::size_t> cells(num_sites_);
  for (std::size_t i = 0; i < num_sites_; ++i) {
    cells[i] = (state / stride_[i]) % levels_;
  }
  return cells;
}

std::vector<std::pair<std::size_t, double>> DiscretizedChain::transition_row(
    std::size_t state) const {
  const auto cells = decode(state);
  const double site_prob = 1.0 / static_cast<double>(num_sites_);
  std::vector<std::pair<std::size_t, double>> row;
  row.reserve(num_sites_ * levels_);
  for (SiteIndex i = 0; i < num_sites_; ++i) {
    std::size_t sum = 0;
    for (const SiteIndex j : neighbors_[i]) {
      sum += cells[j];
    }
    const auto probs = cell_probabilities(i, sum);
    const std::size_t base = state - cells[i] * stride_[i];
    for (std::size_t c = 0; c < levels_; ++c) {
      row.emplace_back(base + c * stride_[i], site_prob * probs[c]);
    }
  }
  return row;
}

std::vector<double> DiscretizedChain::propagate(std::span<const double> mu) const {
  if (mu.size() != num_states_) {
    throw std::invalid_argument("discretized chain: distribution length mismatch");
  }
  std::vector<double> next(num_states_, 0.0);
  for (std::size_t s = 0; s < num_states_; ++s) {
    if (mu[s] == 0.0) {
      continue;
    }
    for (const auto& [succ, p] : transition_row(s)) {
      next[succ] += mu[s] * p;
    }
  }
  return next;
}

std::vector<double> DiscretizedChain::stationary(double tolerance,
                                                 std::size_t max_iterations) const {
  std::vector<double> mu(num_states_, 1.0 / static_cast<double>(num_states_));
  for (std::size_t it = 0; it < max_iterations; ++it) {
    auto next = propagate(mu);
    double change = 0.0;
    for (std::size_t s = 0; s < num_states_; ++s) {
      change += std::abs(next[s] - mu[s]);
    }
    mu = std::move(next);
    if (change <= tolerance) {
      return mu;
    }
  }
  throw std::runtime_error("discretized chain: power iteration did not converge");
}

std::vector<double> discretized_chain_exact_tv(const ModelParams& params,
                                               const NeighborhoodGraph& graph,
                                               std::size_t levels,
                                               std::span<const double> init1,
                                               std::span<const double> init2,
                                               std::uint64_t t_max) {
  const DiscretizedChain chain(params, graph, levels);
  std::vector<double> mu1(chain.num_states(), 0.0);
  std::vector<double> mu2(chain.num_states(), 0.0);
  mu1[chain.encode(init1)] = 1.0;
  mu2[chain.encode(init2)] = 1.0;
  std::vector<double> tv;
  tv.reserve(t_max + 1);
  for (std::uint64_t t = 0;; ++t) {
    double l1 = 0.0;
    for (std::size_t s = 0; s < chain.num_states(); ++s) {
      l1 += std::abs(mu1[s] - mu2[s]);
    }
    tv.push_back(0.5 * l1);
    if (t == t_max) {
      break;
    }
    mu1 = chain.propagate(mu1);
    mu2 = chain.propagate(mu2);
  }
  return tv;
}

void write_tv_series_csv(const std::filesystem::path& path, std::span<const double> tv) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write TV series " + path.string());
  }
  out << "t,tv\n" << std::setprecision(17);
  for (std::size_t t = 0; t < tv.size(); ++t) {
    out << t << ',' << tv[t] << '\n';
  }
}

} // namespace gibbs_tv::oracle
