#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "prwos/geometry.hpp"
#include "prwos/medium.hpp"
#include "prwos/rng.hpp"

using namespace prwos;

namespace {

SceneGeometry layered_scene(double eps = 1e-6) {
  return SceneGeometry(Circle({0, 0}, 1.0), Circle({0, 0}, 0.3), Circle({0, 0}, 0.9), eps);
}

}  // namespace

TEST_CASE("walk radius never crosses a scene circle") {
  const auto g = layered_scene();
  Stream rng({7, 0, 0, 0});
  int checked = 0;
  while (checked < 100000) {
    const Point p{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
    if (!is_bulk(g.classify(p))) continue;
    ++checked;
    const double d = g.walk_radius(p);
    const double r = g.radial(p);
    REQUIRE(d > 0.0);
    // A disk about p of radius d crosses a circle of radius c iff |r - c| < d.
    for (double c : {1.0, 0.3, 0.9}) CHECK(std::abs(r - c) >= d - 1e-12);
  }
}

TEST_CASE("classify is a partition consistent with the layer widths") {
  const double eps = 1e-3;
  const auto g = layered_scene(eps);
  CHECK(g.classify({0.0, 0.0}) == Region::InsideInclusion);
  CHECK(g.classify({0.3 + 0.5 * eps, 0.0}) == Region::InclusionLayer);
  CHECK(g.classify({0.5, 0.0}) == Region::BulkInner);
  CHECK(g.classify({0.0, 0.9 - 0.5 * eps}) == Region::InterfaceLayer);
  CHECK(g.classify({0.0, 0.9 + 0.5 * eps}) == Region::InterfaceLayer);
  CHECK(g.classify({0.95, 0.0}) == Region::BulkOuter);
  CHECK(g.classify({1.0 - 0.5 * eps, 0.0}) == Region::BoundaryLayer);

  Stream rng({8, 0, 0, 0});
  for (int i = 0; i < 20000; ++i) {
    const double r = rng.uniform();
    const double t = kTwoPi * rng.uniform();
    const Point p{r * std::cos(t), r * std::sin(t)};
    const Region reg = g.classify(p);
    const double rr = g.radial(p);
    if (reg == Region::BoundaryLayer) CHECK(1.0 - rr <= eps + 1e-14);
    if (reg == Region::InterfaceLayer) CHECK(std::abs(rr - 0.9) <= eps + 1e-14);
    if (reg == Region::InclusionLayer) CHECK(std::abs(rr - 0.3) <= eps + 1e-14);
    if (is_bulk(reg)) {
      CHECK(1.0 - rr > eps - 1e-14);
      CHECK(std::abs(rr - 0.9) > eps - 1e-14);
      CHECK(rr - 0.3 > eps - 1e-14);
    }
  }
}

TEST_CASE("project_with_frame gives an orthonormal frame at the foot") {
  const Circle c({0.0, 0.0}, 1.0);
  Stream rng({9, 0, 0, 0});
  for (int i = 0; i < 1000; ++i) {
    const double t = kTwoPi * rng.uniform();
    const double r = 0.999 + 0.001 * rng.uniform();
    const Point p{r * std::cos(t), r * std::sin(t)};
    for (auto side : {NormalSide::TowardCenter, NormalSide::AwayFromCenter}) {
      const Frame f = project_with_frame(p, c, side);
      CHECK(std::abs(f.foot.norm() - 1.0) < 1e-14);
      CHECK(std::abs(f.normal.norm() - 1.0) < 1e-14);
      CHECK(std::abs(f.tangent.norm() - 1.0) < 1e-14);
      CHECK(std::abs(f.normal.x * f.tangent.x + f.normal.y * f.tangent.y) < 1e-14);
      const double radial = f.normal.x * f.foot.x + f.normal.y * f.foot.y;
      CHECK(radial == doctest::Approx(side == NormalSide::TowardCenter ? -1.0 : 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("scene construction rejects invalid layouts") {
  CHECK_THROWS(SceneGeometry(Circle({0, 0}, 1.0), Circle({0.1, 0}, 0.3), std::nullopt, 1e-6));
  CHECK_THROWS(SceneGeometry(Circle({0, 0}, 1.0), Circle({0, 0}, 0.95), Circle({0, 0}, 0.9), 1e-6));
  CHECK_THROWS(SceneGeometry(Circle({0, 0}, 1.0), Circle({0, 0}, 0.3), std::nullopt, 0.5));
  CHECK_NOTHROW(SceneGeometry(Circle({0, 0}, 1.0), std::nullopt, std::nullopt, 1e-6));
}

TEST_CASE("points marginally outside the disk are clamped onto it") {
  const Circle c({0.0, 0.0}, 1.0);
  const Point q = clamp_to_disk({1.0 + 5e-13, 0.0}, c);
  CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(clamp_to_disk({0.5, 0.0}, c).x == 0.5);
  CHECK_THROWS_AS(clamp_to_disk({1.001, 0.0}, c), std::logic_error);
}
