#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "prwos/medium.hpp"
#include "prwos/rng.hpp"

using namespace prwos;

TEST_CASE("voltage patterns must sum to zero") {
  CHECK_THROWS_AS(VoltagePattern({1.0, 1.0, -1.0}), std::invalid_argument);
  CHECK_NOTHROW(VoltagePattern({1.0, -0.5, -0.5}));
  const auto alt = VoltagePattern::alternating(8);
  double sum = 0.0;
  for (std::size_t l = 0; l < 8; ++l) sum += alt[l];
  CHECK(sum == 0.0);
  CHECK(alt[0] == -1.0);  // U_1 = (-1)^1
  CHECK(alt[1] == 1.0);
  CHECK(alt[2] == -1.0);
}

TEST_CASE("default layout: eight arcs of length 0.1 with E3 at (1,0)") {
  const auto layout = ElectrodeLayout::standard_eight();
  REQUIRE(layout.count() == 8);
  double total = 0.0;
  for (const auto& a : layout.arcs()) total += 2.0 * a.half_width;
  CHECK(std::abs(total - 0.8) < 1e-12);
  CHECK(std::abs(layout.arc(2).center_angle) < 1e-15);
  CHECK(std::abs(layout.arc(0).center_angle - kPi / 2.0) < 1e-15);
  // Clockwise numbering: E2 sits between E1 (top) and E3 (right).
  CHECK(layout.arc(1).center_angle == doctest::Approx(kPi / 4.0));
  CHECK(layout.electrode_length() == doctest::Approx(0.1));
  CHECK_THROWS(ElectrodeLayout::equispaced(8, 0.9));
}

TEST_CASE("CEM boundary data is piecewise constant with jumps at the arc ends") {
  const CemBoundary cem{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  const BoundaryCondition bc = cem;
  const double hw = 0.05;
  CHECK(boundary_fg(0.0, bc).f == 1.0);
  CHECK(boundary_fg(0.0, bc).g == -1.0);
  CHECK(boundary_fg(hw, bc).f == 1.0);  // closed arcs
  CHECK(boundary_fg(hw + 1e-12, bc).f == 0.0);
  CHECK(boundary_fg(-hw - 1e-12, bc).g == 0.0);
  CHECK(boundary_fg(kPi / 4.0 + 0.01, bc).g == 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = -kPi + kTwoPi * i / 200.0;
    const auto fg = boundary_fg(t, bc);
    const auto l = cem.layout.electrode_index(t);
    CHECK(fg.f == (l ? 1.0 : 0.0));
    CHECK(fg.g == (l ? cem.pattern[*l] : 0.0));
  }
  CHECK(contact_impedance(bc) == 0.1);
}

TEST_CASE("electrode sampling stays on the arc") {
  const auto layout = ElectrodeLayout::standard_eight();
  Stream s({5, 0, kNestStartPoint, 0});
  for (int i = 0; i < 1000; ++i) {
    const Point p = layout.sample_on_electrode(4, s);
    CHECK(std::abs(p.norm() - 1.0) < 1e-14);
    const auto l = layout.electrode_index(std::atan2(p.y, p.x));
    REQUIRE(l.has_value());
    CHECK(*l == 4);
  }
}

TEST_CASE("medium sampling respects the intervals") {
  ConductivityField f;
  f.outer = Parameter::uniform(1.3, 1.7);
  f.inner = Parameter::uniform(0.8, 1.2);
  f.interface_radius = Parameter::uniform(0.89, 0.91);
  CHECK(f.random());
  Stream s({6, 0, 0, 0});
  double mean_outer = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto m = sample_medium(f, s);
    CHECK(m.kappa_outer >= 1.3);
    CHECK(m.kappa_outer <= 1.7);
    CHECK(m.kappa_inner >= 0.8);
    CHECK(m.kappa_inner <= 1.2);
    CHECK(m.interface_radius >= 0.89);
    CHECK(m.interface_radius <= 0.91);
    mean_outer += m.kappa_outer / n;
  }
  CHECK(std::abs(mean_outer - 1.5) < 0.01);
  const auto nom = nominal_medium(f);
  CHECK(nom.kappa_outer == doctest::Approx(1.5));
  CHECK(nom.interface_radius == doctest::Approx(0.9));
}

TEST_CASE("forward model consistency checks") {
  const CemBoundary cem{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1};
  SceneGeometry plain(Circle({0, 0}, 1.0), Circle({0, 0}, 0.3), std::nullopt, 1e-6);
  SceneGeometry layered(Circle({0, 0}, 1.0), Circle({0, 0}, 0.3), Circle({0, 0}, 0.9), 1e-6);
  ConductivityField with_interface;
  with_interface.outer = Parameter::fixed(1.5);
  with_interface.interface_radius = Parameter::fixed(0.9);
  CHECK_THROWS(ForwardModel(plain, with_interface, cem));
  CHECK_NOTHROW(ForwardModel(layered, with_interface, cem));
  ConductivityField jump;
  jump.outer = Parameter::fixed(1.5);
  CHECK_THROWS(ForwardModel(plain, jump, cem));
  const ForwardModel m(layered, with_interface, cem);
  CHECK_FALSE(m.without_inclusion().geometry().inclusion().has_value());
  CHECK(m.with_eps(1e-4).geometry().eps() == 1e-4);
}
