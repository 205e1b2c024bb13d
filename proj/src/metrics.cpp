#include "gibbs_tv/metrics.hpp"

#include "gibbs_tv/stats.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace gibbs_tv {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) {
    throw std::invalid_argument("metric arguments have different lengths (" +
                                std::to_string(x.size()) + " vs " + std::to_string(z.size()) +
                                ")");
  }
}

} // namespace

double weighted_l1(std::span<const double> x, std::span<const double> z,
                   const NeighborhoodGraph& graph) {
  require_same_length(x, z);
  if (x.size() != graph.num_sites()) {
    throw std::invalid_argument("metric arguments do not match the graph size");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += static_cast<double>(graph.degree(i)) * std::abs(x[i] - z[i]);
  }
  return d;
}

double taxicab(std::span<const double> x, std::span<const double> z) {
  require_same_length(x, z);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += std::abs(x[i] - z[i]);
  }
  return d;
}

PairSummary summarize_pairs(std::span<const CoupledPair> pairs, const NeighborhoodGraph& graph) {
  if (pairs.empty()) {
    throw std::invalid_argument("summarize_pairs: no pairs");
  }
  std::vector<double> d(pairs.size());
  std::vector<double> dhat(pairs.size());
  std::vector<double> neq(pairs.size());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    d[r] = weighted_l1(pairs[r].x().x, pairs[r].z().x, graph);
    dhat[r] = taxicab(pairs[r].x().x, pairs[r].z().x);
    neq[r] = pairs[r].all_equal() ? 0.0 : 1.0;
  }
  const auto md = mean_and_error(d);
  const auto mh = mean_and_error(dhat);
  const auto mn = mean_and_error(neq);
  return {pairs.front().t(), md.mean, md.standard_error, mh.mean, mh.standard_error,
          mn.mean, mn.standard_error, pairs.size()};
}

MetricConversion metric_conversion_bounds(double tv, double taxicab_w,
                                          const NeighborhoodGraph& graph) {
  const double n = static_cast<double>(graph.num_sites());
  const double n_max = static_cast<double>(graph.n_max());
  const double n_min = static_cast<double>(graph.n_min());
  return {n * tv, n_max * n * tv, n_min * taxicab_w, n_max * taxicab_w};
}

std::optional<DecayFit> fit_decay_rate(std::span<const PairSummary> series, double snr) {
  std::size_t end = 0;
  while (end < series.size() && series[end].mean_weighted_d > 0.0 &&
         series[end].mean_weighted_d > snr * series[end].se_weighted_d) {
    ++end;
  }
  if (end < 3) {
    return std::nullopt;
  }
  double st = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    st += static_cast<double>(series[k].t);
    sy += std::log(series[k].mean_weighted_d);
  }
  const double n = static_cast<double>(end);
  const double tbar = st / n;
  const double ybar = sy / n;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    const double dt = static_cast<double>(series[k].t) - tbar;
    stt += dt * dt;
    sty += dt * (std::log(series[k].mean_weighted_d) - ybar);
  }
  if (stt == 0.0) {
    return std::nullopt;
  }
  const double slope = sty / stt;
  double rss = 0.0;
  for (std::size_t k = 0; k < end; ++k) {
    const double fitted = ybar + slope * (static_cast<double>(series[k].t) - tbar);
    const double resid = std::log(series[k].mean_weighted_d) - fitted;
    rss += resid * resid;
  }
  const double slope_se = std::sqrt(rss / (n - 2.0) / stt);
  const double rate = std::exp(slope);
  return DecayFit{rate, rate * slope_se, series.front().t, series[end - 1].t, end};
}

void write_summary_csv_header(std::ostream& out) {
  out << "t,mean_d,se_d,mean_dhat,se_dhat,frac_neq,se_frac\n";
}

void append_summary_csv(std::ostream& out, const PairSummary& row) {
  out << row.t << std::setprecision(12) << ',' << row.mean_weighted_d << ','
      << row.se_weighted_d << ',' << row.mean_taxicab << ',' << row.se_taxicab << ','
      << row.noncoalesced_fraction << ',' << row.se_noncoalesced << '\n';
}

} // namespace gibbs_tv
