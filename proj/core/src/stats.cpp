#include "prwos/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace prwos {

void RunningMoments::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

double RunningMoments::stddev() const { return std::sqrt(variance()); }

double RunningMoments::std_error() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

RunningMoments merge(const RunningMoments& a, const RunningMoments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  RunningMoments r;
  r.n = a.n + b.n;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double nr = static_cast<double>(r.n);
  const double d = b.mean - a.mean;
  r.mean = a.mean + d * nb / nr;
  r.m2 = a.m2 + b.m2 + d * d * na * nb / nr;
  return r;
}

void PairMoments::add(double x, double y) {
  ++n;
  const double inv = 1.0 / static_cast<double>(n);
  const double dx = x - mean_x;
  const double dy = y - mean_y;
  mean_x += dx * inv;
  mean_y += dy * inv;
  m2_x += dx * (x - mean_x);
  m2_y += dy * (y - mean_y);
  c_xy += dx * (y - mean_y);
}

double PairMoments::var_x() const { return n > 1 ? m2_x / static_cast<double>(n - 1) : 0.0; }
double PairMoments::var_y() const { return n > 1 ? m2_y / static_cast<double>(n - 1) : 0.0; }
double PairMoments::cov() const { return n > 1 ? c_xy / static_cast<double>(n - 1) : 0.0; }

double PairMoments::variance_of(double a, double b) const {
  const double v = a * a * var_x() + b * b * var_y() + 2.0 * a * b * cov();
  return v > 0.0 ? v : 0.0;
}

PairMoments merge(const PairMoments& a, const PairMoments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  PairMoments r;
  r.n = a.n + b.n;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double w = na * nb / static_cast<double>(r.n);
  const double dx = b.mean_x - a.mean_x;
  const double dy = b.mean_y - a.mean_y;
  r.mean_x = a.mean_x + dx * nb / static_cast<double>(r.n);
  r.mean_y = a.mean_y + dy * nb / static_cast<double>(r.n);
  r.m2_x = a.m2_x + b.m2_x + dx * dx * w;
  r.m2_y = a.m2_y + b.m2_y + dy * dy * w;
  r.c_xy = a.c_xy + b.c_xy + dx * dy * w;
  return r;
}

EocFit fit_eoc(std::span<const std::pair<double, double>> h_bias) {
  EocFit fit;
  for (const auto& [h, bias] : h_bias) {
    if (!(h > 0.0)) throw std::invalid_argument("step sizes must be positive");
    if (bias == 0.0 || !std::isfinite(bias)) {
      fit.warnings.push_back("dropped point h=" + std::to_string(h) + " with zero bias");
      continue;
    }
    fit.points.emplace_back(std::log(h), std::log(std::abs(bias)));
  }
  const auto m = fit.points.size();
  if (m < 2) throw std::invalid_argument("EOC fit needs at least two nonzero biases");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : fit.points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("EOC fit needs at least two distinct step sizes");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (const auto& [x, y] : fit.points) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(m));
  return fit;
}

EfficiencyRecord efficiency(double variance, double wall_time) {
  if (variance < 0.0 || wall_time < 0.0) {
    throw std::invalid_argument("variance and time must be non-negative");
  }
  return {variance, wall_time, variance * wall_time};
}

EfficiencyRecord efficiency(const RunningMoments& moments, double wall_time) {
  if (moments.n < 2) throw std::invalid_argument("efficiency needs at least two samples");
  return efficiency(moments.variance(), wall_time);
}

}  // namespace prwos
