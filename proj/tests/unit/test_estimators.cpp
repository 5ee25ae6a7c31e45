#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <cstring>
#include <vector>

#include "prwos/estimators.hpp"
#include "prwos/reference_solver.hpp"

using namespace prwos;

namespace {

ForwardModel cem_model(std::optional<double> inclusion, double z, std::vector<double> u = {}) {
  std::optional<Circle> t;
  if (inclusion) t = Circle({0, 0}, *inclusion);
  SceneGeometry g(Circle({0, 0}, 1.0), t, std::nullopt, 1e-6);
  const VoltagePattern pattern = u.empty() ? VoltagePattern::alternating(8) : VoltagePattern(u);
  return ForwardModel(g, ConductivityField{}, CemBoundary{ElectrodeLayout::standard_eight(), pattern, z});
}

WalkParams step(double h) {
  WalkParams p;
  p.h = h;
  return p;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("for_each_block visits every index exactly once") {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> seen(10007);
    for_each_block(seen.size(), 64, workers, [&](std::uint64_t b, std::uint64_t e, std::size_t slot) {
      CHECK(slot == b / 64);
      for (std::uint64_t i = b; i < e; ++i) seen[i]++;
    });
    for (const auto& s : seen) CHECK(s.load() == 1);
  }
  CHECK_THROWS_AS(for_each_block(1000, 10, 4,
                                 [](std::uint64_t b, std::uint64_t, std::size_t) {
                                   if (b == 500) throw std::runtime_error("boom");
                                 }),
                  std::runtime_error);
}

TEST_CASE("currents are identical for any worker count") {
  const auto m = cem_model(0.5, 0.5);
  const DoubleRandomizationPlan plan{2, 300};
  RunOptions o1;
  o1.seed = 61;
  o1.block_size = 128;
  RunOptions o4 = o1;
  o4.workers = 4;
  const auto a = estimate_currents(m, step(0.05), plan, o1);
  const auto b = estimate_currents(m, step(0.05), plan, o4);
  for (std::size_t l = 0; l < 8; ++l) {
    CHECK(same_bits(a.J[l], b.J[l]));
    CHECK(same_bits(a.per_electrode[l].variance, b.per_electrode[l].variance));
  }
  CHECK(same_bits(a.c_hat, b.c_hat));
}

TEST_CASE("charge conservation and the inclusion constant") {
  const auto with = estimate_currents(cem_model(0.5, 0.5), step(0.05), {1, 500}, {});
  CHECK(std::abs(with.charge_residual) < 1e-10);
  CHECK(with.hits > 0);
  const auto without = estimate_currents(cem_model(std::nullopt, 0.5), step(0.05), {1, 500}, {});
  CHECK(without.c_hat == 0.0);
  CHECK(without.hits == 0);
}

TEST_CASE("U0 estimates are linear in the voltage pattern") {
  const std::vector<double> u{-1, 1, -1, 1, -1, 1, -1, 1};
  std::vector<double> u2;
  for (double x : u) u2.push_back(2.0 * x);
  RunOptions o;
  o.seed = 62;
  for (std::size_t l : {0u, 2u, 5u}) {
    const auto a = estimate_xi(l, XiKind::U0, cem_model(0.3, 0.5, u), step(0.05), {1, 400}, o);
    const auto b = estimate_xi(l, XiKind::U0, cem_model(0.3, 0.5, u2), step(0.05), {1, 400}, o);
    CHECK(b.mean == doctest::Approx(2.0 * a.mean).epsilon(1e-12));
    const auto h1 = estimate_xi(l, XiKind::U1, cem_model(0.3, 0.5, u), step(0.05), {1, 400}, o);
    const auto h2 = estimate_xi(l, XiKind::U1, cem_model(0.3, 0.5, u2), step(0.05), {1, 400}, o);
    CHECK(h1.mean == h2.mean);
  }
}

TEST_CASE("pooled and split double-randomization plans agree") {
  const auto m = cem_model(0.5, 0.5);
  RunOptions o;
  o.seed = 63;
  const auto pooled = estimate_currents(m, step(0.04), {1, 4000}, o);
  const auto split = estimate_currents(m, step(0.04), {4000, 1}, o);
  const double se = std::hypot(pooled.std_error(2), split.std_error(2));
  CHECK(std::abs(pooled.J[2] - split.J[2]) < 3.0 * se);
}

TEST_CASE("variance stays bounded as h shrinks") {
  const auto m = cem_model(0.5, 0.5);
  RunOptions o;
  o.seed = 64;
  const auto coarse = estimate_currents(m, step(0.1), {1, 2000}, o);
  const auto fine = estimate_currents(m, step(0.01), {1, 2000}, o);
  CHECK(fine.per_electrode[2].variance <= 2.0 * coarse.per_electrode[2].variance);
}

TEST_CASE("direct currents agree with the module reference") {
  // Full-scale comparisons live in the acceptance suite.
  const auto m = cem_model(0.5, 0.5);
  RunOptions o;
  o.seed = 65;
  const auto e = estimate_currents(m, step(0.01), {1, 4000}, o);
  const auto ref = solve_cem(m, 128).currents;
  // Slack covers the O(h) bias at this step.
  CHECK(std::abs(e.J[2] - ref.J[2]) < 3.0 * e.std_error(2) + 0.02);
}

TEST_CASE("censoring is reported, never dropped silently") {
  const auto m = cem_model(0.5, 0.5);
  WalkParams p = step(0.01);
  p.max_steps = 2;
  CHECK_THROWS_AS(estimate_currents(m, p, {1, 50}, {}), CensoringError);
}

TEST_CASE("ratio estimator refuses an unreachable inclusion") {
  const CemBoundary cem{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  std::vector<XiEstimate> x0(8), x1(8);
  for (std::size_t l = 0; l < 8; ++l) {
    x0[l] = {l, XiKind::U0, 0.1, 1.0, 100};
    x1[l] = {l, XiKind::U1, 0.0, 1.0, 100};
  }
  CHECK_THROWS(estimate_c(x0, x1, cem));
}

TEST_CASE("independent ensemble for c") {
  const auto m = cem_model(0.5, 0.5);
  RunOptions o;
  o.seed = 66;
  o.independent_c = true;
  const auto e = estimate_currents(m, step(0.05), {1, 1000}, o);
  RunOptions shared = o;
  shared.independent_c = false;
  const auto s = estimate_currents(m, step(0.05), {1, 1000}, shared);
  CHECK(e.c_hat != s.c_hat);
  CHECK(std::abs(e.J[2] - s.J[2]) < 3.0 * std::hypot(e.std_error(2), s.std_error(2)));
}
