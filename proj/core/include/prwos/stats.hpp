#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace prwos {

// Welford accumulator with Chan's pairwise merge.
struct RunningMoments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations

  void add(double x);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stddev() const;
  double std_error() const;
};

RunningMoments merge(const RunningMoments& a, const RunningMoments& b);

// Joint moments of a pair (x, y), enough to form the variance of any linear
// combination a x + b y.
struct PairMoments {
  std::uint64_t n = 0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double m2_x = 0.0;
  double m2_y = 0.0;
  double c_xy = 0.0;

  void add(double x, double y);
  double var_x() const;
  double var_y() const;
  double cov() const;
  // Sample variance of a x + b y.
  double variance_of(double a, double b) const;
};

PairMoments merge(const PairMoments& a, const PairMoments& b);

struct EocFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the log-log residuals
  std::vector<std::pair<double, double>> points;  // (log h, log |bias|)
  std::vector<std::string> warnings;
};

// Least-squares slope of log|bias| against log h. Zero biases are dropped
// with a warning; fewer than two usable points throws.
EocFit fit_eoc(std::span<const std::pair<double, double>> h_bias);

struct EfficiencyRecord {
  double variance = 0.0;
  double wall_time = 0.0;  // seconds
  double C = 0.0;
};

EfficiencyRecord efficiency(const RunningMoments& moments, double wall_time);
EfficiencyRecord efficiency(double variance, double wall_time);

}  // namespace prwos
