#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmd2d/game.hpp"

namespace mmd2d {

/// One established link in one frame.
struct LinkOutcome {
  int frame = 0;
  int tx_id = -1;
  int rx_id = -1;
  double distance = 0.0;
  bool los = true;
  double beamwidth = 0.0;      // rad, both ends
  double sinr = 0.0;
  double rate = 0.0;           // bits/s
  std::optional<double> window_throughput;  // xi, absent when nothing was requested
  double requested_bits = 0.0;
  std::uint64_t delivered_bits = 0;
  double stability_time = 0.0;
  double alignment_time = 0.0;
  bool penalty_active = false;
  bool operator==(const LinkOutcome&) const = default;
};

struct TrialMetrics {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  int transmitters = 0;
  int requesters = 0;
  int links = 0;                  // link-frames
  int matched_requesters = 0;     // requesters matched in at least one frame
  double sum_throughput = 0.0;    // sum of xi over links with requested data
  double mean_throughput = 0.0;   // sum_throughput / links with xi
  double sum_rate = 0.0;
  double mean_stability_time = 0.0;  // finite stability times only
  std::uint64_t delivered_segments = 0;
  std::uint64_t demanded_bits = 0;
  std::uint64_t d2d_bits = 0;
  std::uint64_t cellular_bits = 0;
  int lll_iterations = 0;         // summed over frames
  int lll_runs = 0;
  bool lll_converged = true;
  double potential = 0.0;         // Theta of the chosen profile, summed over frames
  double matched_fraction = 0.0;
  std::vector<LinkOutcome> link_outcomes;
  std::vector<TracePoint> theta_trace;  // first frame, when requested

  bool operator==(const TrialMetrics&) const = default;
};

/// rate * T^S / requested. Absent when requested is zero; infinite for a
/// positive rate with unbounded stability.
std::optional<double> window_throughput(double rate, double stability, double requested);

/// min(rate * (T^S - T^A), requested), floored at zero.
double delivered_bits(double rate, double stability, double alignment, double requested);

/// Scalar fields of a trial in a fixed order, for aggregation and CSV.
std::vector<std::pair<std::string, double>> trial_scalars(const TrialMetrics& m);

struct Summary {
  std::string name;
  std::size_t count = 0;  // trials with a finite value
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
};

struct Aggregate {
  std::size_t trials = 0;
  std::vector<Summary> metrics;
  std::vector<std::pair<std::string, std::vector<CdfPoint>>> cdfs;
  const Summary& metric(const std::string& name) const;
};

/// Per-metric mean and standard error, plus an empirical CDF on
/// `cdf_points` evenly spaced values from min to max. Non-finite values are
/// skipped. A pure fold in trial order.
Aggregate aggregate(std::span<const TrialMetrics> trials, std::size_t cdf_points = 101);

/// Standard error of the mean paired difference a[i] - b[i].
Summary paired_difference(std::span<const double> a, std::span<const double> b);

}  // namespace mmd2d
