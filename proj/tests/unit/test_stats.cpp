#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "prwos/rng.hpp"
#include "prwos/stats.hpp"

using namespace prwos;

TEST_CASE("merge pools moments exactly") {
  RunningMoments a, b, all;
  a.add(1.0);
  b.add(2.0);
  b.add(3.0);
  for (double x : {1.0, 2.0, 3.0}) all.add(x);
  const auto m = merge(a, b);
  CHECK(m.n == 3);
  CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.variance() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(merge(a, RunningMoments{}).mean == a.mean);
  CHECK(merge(RunningMoments{}, a).n == a.n);
}

TEST_CASE("merge is associative and commutative on random partitions") {
  Stream s({21, 0, 0, 0});
  std::vector<double> xs(100000);
  for (auto& x : xs) x = std::exp(2.0 * s.uniform()) - 3.0 * s.uniform();
  RunningMoments pooled;
  for (double x : xs) pooled.add(x);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Three consecutive chunks with random cut points, merged in two orders.
    std::size_t c1 = static_cast<std::size_t>(s.uniform() * xs.size());
    std::size_t c2 = static_cast<std::size_t>(s.uniform() * xs.size());
    if (c1 > c2) std::swap(c1, c2);
    RunningMoments p[3];
    for (std::size_t i = 0; i < xs.size(); ++i) p[i < c1 ? 0 : i < c2 ? 1 : 2].add(xs[i]);
    const auto left = merge(merge(p[0], p[1]), p[2]);
    const auto right = merge(p[0], merge(p[1], p[2]));
    const auto swapped = merge(p[2], merge(p[1], p[0]));
    for (const auto& m : {left, right, swapped}) {
      REQUIRE(m.n == pooled.n);
      worst = std::max(worst, std::abs(m.mean - pooled.mean) / std::abs(pooled.mean));
      worst = std::max(worst, std::abs(m.m2 - pooled.m2) / pooled.m2);
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("pair moments give the variance of linear combinations") {
  Stream s({22, 0, 0, 0});
  PairMoments pm;
  RunningMoments direct;
  PairMoments a, b;
  for (int i = 0; i < 5000; ++i) {
    const double x = s.uniform();
    const double y = x + s.uniform();
    pm.add(x, y);
    direct.add(2.0 * x - 0.5 * y);
    (i < 1234 ? a : b).add(x, y);
  }
  CHECK(pm.variance_of(2.0, -0.5) == doctest::Approx(direct.variance()).epsilon(1e-10));
  const auto m = merge(a, b);
  CHECK(m.cov() == doctest::Approx(pm.cov()).epsilon(1e-12));
  CHECK(m.var_y() == doctest::Approx(pm.var_y()).epsilon(1e-12));
}

TEST_CASE("fit_eoc recovers planted power laws") {
  for (double slope : {1.0, 1.5, 2.0}) {
    std::vector<std::pair<double, double>> pts;
    for (double h : {0.04, 0.08, 0.12, 0.16, 0.2}) pts.emplace_back(h, 0.7 * std::pow(h, slope));
    const auto fit = fit_eoc(pts);
    CHECK(std::abs(fit.slope - slope) < 1e-12);
    CHECK(fit.residual < 1e-12);
  }
  std::vector<std::pair<double, double>> sq{{0.05, 0.0025}, {0.1, 0.01}, {0.2, 0.04}};
  CHECK(fit_eoc(sq).slope == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<std::pair<double, double>> lin;
  for (double h : {0.1, 0.2, 0.3, 0.4, 0.5}) lin.emplace_back(h, 3.0 * h);
  const auto f = fit_eoc(lin);
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("fit_eoc drops zero biases with a warning") {
  std::vector<std::pair<double, double>> pts{{0.1, 0.01}, {0.2, 0.0}, {0.4, 0.16}};
  const auto fit = fit_eoc(pts);
  CHECK(fit.points.size() == 2);
  CHECK(fit.warnings.size() == 1);
  CHECK(fit.slope == doctest::Approx(2.0));
  std::vector<std::pair<double, double>> one{{0.1, 0.01}, {0.2, 0.0}};
  CHECK_THROWS_AS(fit_eoc(one), std::invalid_argument);
}

TEST_CASE("efficiency is variance times time") {
  CHECK(efficiency(0.5, 2.0).C == doctest::Approx(1.0));
  CHECK(efficiency(0.0, 3.0).C == 0.0);
  RunningMoments m;
  for (double x : {1.0, 2.0, 3.0}) m.add(x);
  CHECK(efficiency(m, 4.0).C == doctest::Approx(4.0));
}
