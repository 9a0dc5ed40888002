#include "mmd2d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmd2d/units.hpp"

namespace mmd2d {

namespace {

Summary summarize(std::string name, std::vector<double> values) {
  Summary s;
  s.name = std::move(name);
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return !std::isfinite(v); }),
               values.end());
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  if (values.size() > 1) s.std_error = std::sqrt(ss / (values.size() - 1) / values.size());
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> values, std::size_t points) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return !std::isfinite(v); }),
               values.end());
  std::vector<CdfPoint> out;
  if (values.empty() || points == 0) return out;
  std::sort(values.begin(), values.end());
  double lo = values.front(), hi = values.back();
  if (points == 1 || lo == hi) {
    out.push_back({hi, 1.0});
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    double x = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
    auto it = std::upper_bound(values.begin(), values.end(), x);
    out.push_back({x, static_cast<double>(it - values.begin()) / values.size()});
  }
  return out;
}

}  // namespace

std::optional<double> window_throughput(double rate, double stability, double requested) {
  if (!(requested > 0.0)) return std::nullopt;
  if (!(rate > 0.0)) return 0.0;
  return rate * stability / requested;
}

double delivered_bits(double rate, double stability, double alignment, double requested) {
  if (!(rate > 0.0) || !(requested > 0.0)) return 0.0;
  double window = stability - alignment;
  if (!(window > 0.0)) return 0.0;
  return std::min(rate * window, requested);
}

std::vector<std::pair<std::string, double>> trial_scalars(const TrialMetrics& m) {
  return {
      {"transmitters", m.transmitters},
      {"requesters", m.requesters},
      {"links", m.links},
      {"matched_requesters", m.matched_requesters},
      {"matched_fraction", m.matched_fraction},
      {"sum_throughput", m.sum_throughput},
      {"mean_throughput", m.mean_throughput},
      {"sum_rate", m.sum_rate},
      {"mean_stability_time", m.mean_stability_time},
      {"delivered_segments", static_cast<double>(m.delivered_segments)},
      {"demanded_bits", static_cast<double>(m.demanded_bits)},
      {"d2d_bits", static_cast<double>(m.d2d_bits)},
      {"cellular_bits", static_cast<double>(m.cellular_bits)},
      {"lll_iterations", m.lll_iterations},
      {"lll_runs", m.lll_runs},
      {"lll_converged", m.lll_converged ? 1.0 : 0.0},
      {"potential", m.potential},
  };
}

const Summary& Aggregate::metric(const std::string& name) const {
  for (const auto& s : metrics)
    if (s.name == name) return s;
  throw std::out_of_range("no metric named " + name);
}

Aggregate aggregate(std::span<const TrialMetrics> trials, std::size_t cdf_points) {
  Aggregate out;
  out.trials = trials.size();
  if (trials.empty()) return out;
  auto names = trial_scalars(trials.front());
  std::vector<std::vector<double>> columns(names.size());
  for (const auto& t : trials) {
    auto row = trial_scalars(t);
    for (std::size_t i = 0; i < row.size(); ++i) columns[i].push_back(row[i].second);
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.metrics.push_back(summarize(names[i].first, columns[i]));
    out.cdfs.emplace_back(names[i].first, empirical_cdf(columns[i], cdf_points));
  }
  return out;
}

Summary paired_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("paired samples differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return summarize("difference", std::move(d));
}

}  // namespace mmd2d
