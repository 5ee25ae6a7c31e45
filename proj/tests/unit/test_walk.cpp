#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <complex>
#include <vector>

#include "prwos/estimators.hpp"
#include "prwos/stats.hpp"
#include "prwos/walk.hpp"

using namespace prwos;

namespace {

// CDF of the Poisson-kernel exit angle from (r, 0) in the unit disk, on (-pi, pi).
double poisson_cdf(double r, double a) {
  return 0.5 + std::atan((1.0 + r) / (1.0 - r) * std::tan(0.5 * a)) / kPi;
}

double ks_statistic(std::vector<double> angles, double r) {
  std::sort(angles.begin(), angles.end());
  const double n = static_cast<double>(angles.size());
  double d = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double F = poisson_cdf(r, angles[i]);
    d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
  }
  return d;
}

ForwardModel robin_disk(double z, double h, std::optional<double> inclusion = std::nullopt) {
  std::optional<Circle> t;
  if (inclusion) t = Circle({0, 0}, *inclusion);
  SceneGeometry g(Circle({0, 0}, 1.0), t, std::nullopt, h * h * h);
  return ForwardModel(g, ConductivityField{}, IdealizedRobin{{{4, 1.0, 0.0}}, z, 0.0});
}

}  // namespace

TEST_CASE("uncentered exit angle formula") {
  CHECK(uncentered_exit_angle(0.3, 0.5, 0.5) == doctest::Approx(0.3 + kPi));
  CHECK(uncentered_exit_angle(0.3, 0.5, 1e-12) == doctest::Approx(0.3).epsilon(1e-9));
  // ratio 1 (start at the center): alpha - theta = 2 pi (u - 1/2) wrapped.
  for (double u : {0.1, 0.3, 0.7}) {
    const double a = uncentered_exit_angle(0.0, 1.0, u);
    CHECK(wrap_angle(a) == doctest::Approx(wrap_angle(kTwoPi * u)));
  }
  Stream s({30, 0, 0, 0});
  CHECK_THROWS(sphere_exit_uncentered(Circle({0, 0}, 1.0), {1.0, 0.0}, s));
}

TEST_CASE("uncentered exits from r = 0.5 hit the right half with probability 2 atan(3)/pi") {
  Stream s({31, 0, 0, 0});
  const Circle disk({0, 0}, 1.0);
  int inside = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const Point q = sphere_exit_uncentered(disk, {0.5, 0.0}, s);
    if (q.x >= 0.0) ++inside;
  }
  CHECK(std::abs(static_cast<double>(inside) / n - 2.0 * std::atan(3.0) / kPi) < 0.002);
}

TEST_CASE("uncentered exit law passes Kolmogorov-Smirnov against the Poisson kernel") {
  const Circle disk({0, 0}, 1.0);
  const int n = 100000;
  for (double r : {0.0, 0.5, 0.9}) {
    Stream s({32, static_cast<std::uint64_t>(r * 10), 0, 0});
    std::vector<double> angles(n);
    for (auto& a : angles) {
      const Point q = sphere_exit_uncentered(disk, {r, 0.0}, s);
      CHECK(std::abs(q.norm() - 1.0) < 1e-14);
      a = std::atan2(q.y, q.x);
    }
    CAPTURE(r);
    CHECK(ks_statistic(angles, r) < 1.63 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("centered sphere exits satisfy the mean value property") {
  Stream s({33, 0, 0, 0});
  RunningMoments m;
  for (int i = 0; i < 1000000; ++i) {
    const Point q = sphere_exit_centered({0.0, 0.0}, 0.5, s);
    REQUIRE(std::abs(q.norm() - 0.5) < 1e-14);
    m.add(q.x * q.x - q.y * q.y);
  }
  CHECK(std::abs(m.mean) < 3.0 * m.std_error());
}

TEST_CASE("interface step probabilities") {
  const auto eq = interface_steps(0.01, 1.5, 1.0, InterfaceScheme::EqualStep);
  CHECK(eq.p_out == doctest::Approx(0.6));
  CHECK(eq.h_out == eq.h_in);
  const auto fl = interface_steps(0.01, 1.5, 1.0, InterfaceScheme::EqualFlux);
  CHECK(fl.p_out == doctest::Approx(0.5));
  for (auto scheme : {InterfaceScheme::EqualFlux, InterfaceScheme::EqualStep, InterfaceScheme::SqrtScaled}) {
    const auto st = interface_steps(0.02, 1.3, 1.3, scheme);
    CHECK(st.p_out == doctest::Approx(0.5));
    const auto other = interface_steps(0.02, 0.7, 2.1, scheme);
    CHECK(other.p_out > 0.0);
    CHECK(other.p_out < 1.0);
  }
}

TEST_CASE("boundary replacement: absorption probability, scores and stencil") {
  const double h = 0.1, z = 0.5;
  SceneGeometry g(Circle({0, 0}, 1.0), std::nullopt, std::nullopt, 1e-6);
  const BoundaryCondition bc = IdealizedRobin{{{0, 1.0, 0.0}}, z, 0.0};
  WalkParams p;
  p.h = h;
  Stream s({34, 0, 0, 0});
  const Point x{std::cos(0.4), std::sin(0.4)};
  int absorbed = 0, plus = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto act = boundary_replacement(x, g, bc, z, p, s);
    if (const auto* a = std::get_if<Absorb>(&act)) {
      ++absorbed;
      CHECK(a->score == doctest::Approx(h / (h + z)));
    } else {
      const auto& m = std::get<Move>(act);
      CHECK(m.score == doctest::Approx(h / (h + z)));
      CHECK(distance(m.to, x) == doctest::Approx(h * std::sqrt(2.0)));
      CHECK(m.to.norm() < 1.0);
      // Inward displacement h along the normal.
      CHECK(1.0 - (m.to.x * x.x + m.to.y * x.y) == doctest::Approx(h));
      if (m.to.x * -x.y + m.to.y * x.x > 0.0) ++plus;
    }
  }
  const double pa = h / (h + z);
  CHECK(std::abs(static_cast<double>(absorbed) / n - pa) < 4.0 * std::sqrt(pa * (1 - pa) / n));
  const double moves = n - absorbed;
  CHECK(std::abs(plus / moves - 0.5) < 4.0 * std::sqrt(0.25 / moves));
}

TEST_CASE("boundary replacement in an electrode gap never absorbs") {
  SceneGeometry g(Circle({0, 0}, 1.0), std::nullopt, std::nullopt, 1e-6);
  const BoundaryCondition bc =
      CemBoundary{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  WalkParams p;
  p.h = 0.01;
  Stream s({35, 0, 0, 0});
  const Point x{std::cos(0.3), std::sin(0.3)};
  for (int i = 0; i < 1000; ++i) {
    const auto act = boundary_replacement(x, g, bc, 0.1, p, s);
    REQUIRE(std::holds_alternative<Move>(act));
    CHECK(std::get<Move>(act).score == 0.0);
  }
  CHECK_THROWS_AS(boundary_replacement({0.5, 0.0}, g, bc, 0.1, p, s), std::logic_error);
}

TEST_CASE("mean boundary hits follow the geometric law 1 + z/h") {
  const double z = 0.5, h = 0.05;
  RunOptions opt;
  opt.seed = 36;
  WalkParams p;
  p.h = h;
  const auto e = estimate_potential({0.99361, 0.11286}, robin_disk(z, h), p,
                                    ScoreKind::IdealizedPotential, 1000000, opt);
  CHECK(std::abs(e.mean_boundary_hits / (1.0 + z / h) - 1.0) < 0.05);
}

TEST_CASE("Dirichlet walks are unbiased for harmonic polynomials") {
  SceneGeometry g(Circle({0, 0}, 1.0), std::nullopt, std::nullopt, 1e-6);
  const Point x{0.3, -0.45};
  for (int k = 1; k <= 3; ++k) {
    auto phi = [k](Point q) { return std::pow(std::complex<double>(q.x, q.y), k).real(); };
    for (auto sampler : {Sampler::Centered, Sampler::Uncentered}) {
      RunningMoments m;
      for (std::uint64_t i = 0; i < 1000000; ++i) {
        Stream s({37, i, static_cast<std::uint32_t>(k), 0});
        m.add(simulate_dirichlet(x, g, phi, sampler, s));
      }
      CAPTURE(k);
      CHECK(std::abs(m.mean - phi(x)) < 3.0 * m.std_error());
    }
  }
}

TEST_CASE("centered and uncentered samplers estimate the same point value") {
  const double z = 0.5, h = 0.05;
  RunOptions opt;
  opt.seed = 38;
  WalkParams c, u;
  c.h = u.h = h;
  u.sampler = Sampler::Uncentered;
  const auto m = robin_disk(z, h);
  const auto ec = estimate_potential({0.99361, 0.11286}, m, c, ScoreKind::IdealizedPotential, 100000, opt);
  const auto eu = estimate_potential({0.99361, 0.11286}, m, u, ScoreKind::IdealizedPotential, 100000, opt);
  const double se = std::hypot(ec.moments.std_error(), eu.moments.std_error());
  CHECK(std::abs(ec.moments.mean - eu.moments.mean) < 3.0 * se);
}

TEST_CASE("U1 trajectories collect no boundary score and can hit the inclusion") {
  SceneGeometry g(Circle({0, 0}, 1.0), Circle({0, 0}, 0.3), std::nullopt, 1e-6);
  const BoundaryCondition bc =
      CemBoundary{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  WalkParams p;
  p.h = 0.01;
  int hits = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    Stream s({39, i, 0, 0});
    const auto out = simulate({0.999, 0.0}, g, bc, MediumRealization{}, p, ScoreKind::U1, s);
    CHECK(out.score_sum == 0.0);
    CHECK(out.terminal != Terminal::Censored);
    if (out.terminal == Terminal::HitInclusion) {
      ++hits;
      CHECK(out.point.norm() == doctest::Approx(0.3));
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("trajectories are censored at max_steps") {
  SceneGeometry g(Circle({0, 0}, 1.0), Circle({0, 0}, 0.3), std::nullopt, 1e-6);
  const BoundaryCondition bc =
      CemBoundary{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  WalkParams p;
  p.h = 0.004;
  p.max_steps = 3;
  Stream s({40, 0, 0, 0});
  const auto out = simulate({0.6, 0.0}, g, bc, MediumRealization{}, p, ScoreKind::U0, s);
  CHECK(out.terminal == Terminal::Censored);
  CHECK(out.steps == 3);
}

TEST_CASE("through chains record the first inclusion visit") {
  SceneGeometry g(Circle({0, 0}, 1.0), Circle({0, 0}, 0.5), std::nullopt, 1e-6);
  const BoundaryCondition bc =
      CemBoundary{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  WalkParams p;
  p.h = 0.01;
  p.chain_mode = ChainMode::ThroughChain;
  int recorded = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Stream s({41, i, 0, 0});
    const auto out = simulate({0.7, 0.0}, g, bc, MediumRealization{}, p, ScoreKind::V, s);
    CHECK(out.terminal == Terminal::AbsorbedAtElectrode);
    if (out.first_hit) {
      ++recorded;
      CHECK(out.first_hit->norm() == doctest::Approx(0.5));
    }
  }
  CHECK(recorded > 0);
}
