#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "prwos/geometry.hpp"

namespace prwos {

class Stream;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct ElectrodeArc {
  double center_angle = 0.0;  // radians
  double half_width = 0.0;    // radians
};

// Electrodes on the outer circle. Indices are 0-based in code; the usual
// E_1..E_N labels correspond to indices 0..N-1.
class ElectrodeLayout {
 public:
  // Arcs must be pairwise disjoint with a common width.
  ElectrodeLayout(std::vector<ElectrodeArc> arcs, double outer_radius = 1.0);

  // N equal electrodes numbered clockwise, the first centered at
  // first_center; the default places E_1 at the top and E_3 at (1,0).
  static ElectrodeLayout equispaced(std::size_t count, double arc_length,
                                    double first_center = kPi / 2.0,
                                    double outer_radius = 1.0);
  static ElectrodeLayout standard_eight();

  std::size_t count() const { return arcs_.size(); }
  const std::vector<ElectrodeArc>& arcs() const { return arcs_; }
  const ElectrodeArc& arc(std::size_t l) const { return arcs_.at(l); }
  double outer_radius() const { return radius_; }
  // |E|, identical for every electrode.
  double electrode_length() const { return 2.0 * arcs_.front().half_width * radius_; }

  // Closed arcs: endpoints belong to the electrode.
  std::optional<std::size_t> electrode_index(double theta) const;

  // Point on electrode l at fraction u in [0,1) of its arc, counterclockwise.
  Point point_on_electrode(std::size_t l, double u) const;
  Point sample_on_electrode(std::size_t l, Stream& rng) const;

 private:
  std::vector<ElectrodeArc> arcs_;
  double radius_;
};

class VoltagePattern {
 public:
  explicit VoltagePattern(std::vector<double> voltages);
  // U_j = (-1)^j for j = 1..n.
  static VoltagePattern alternating(std::size_t n);

  std::size_t size() const { return u_.size(); }
  double operator[](std::size_t l) const { return u_[l]; }
  const std::vector<double>& values() const { return u_; }

 private:
  std::vector<double> u_;
};

struct FourierTerm {
  int k = 0;
  double a = 0.0;  // cos coefficient
  double b = 0.0;  // sin coefficient
};

// z kappa d_nu u + u = phi on the whole boundary.
struct IdealizedRobin {
  std::vector<FourierTerm> phi;
  double z = 1.0;
  // Dirichlet value prescribed on the inclusion, when one is present.
  double inclusion_potential = 0.0;

  double evaluate_phi(double theta) const;
};

// z kappa d_nu u + f u = g with f, g built from the electrodes.
struct CemBoundary {
  ElectrodeLayout layout;
  VoltagePattern pattern;
  double z = 1.0;
};

using BoundaryCondition = std::variant<IdealizedRobin, CemBoundary>;

struct BoundaryData {
  double f = 0.0;
  double g = 0.0;
};

BoundaryData boundary_fg(double theta, const BoundaryCondition& bc);
double contact_impedance(const BoundaryCondition& bc);
const CemBoundary& require_cem(const BoundaryCondition& bc);

// A scalar that is either fixed (lo == hi) or uniform on [lo, hi].
struct Parameter {
  double lo = 1.0;
  double hi = 1.0;

  static Parameter fixed(double v) { return {v, v}; }
  static Parameter uniform(double lo, double hi) { return {lo, hi}; }
  bool random() const { return hi > lo; }
  double mean() const { return 0.5 * (lo + hi); }
};

// Conductivities are stored by layer position: outer is the layer touching
// the boundary, inner is the region inside the interface.
struct ConductivityField {
  Parameter outer = Parameter::fixed(1.0);
  Parameter inner = Parameter::fixed(1.0);
  std::optional<Parameter> interface_radius;

  bool random() const;
};

struct MediumRealization {
  double kappa_outer = 1.0;
  double kappa_inner = 1.0;
  double interface_radius = 0.0;  // 0 when the scene has no interface
};

MediumRealization sample_medium(const ConductivityField& field, Stream& rng);
MediumRealization nominal_medium(const ConductivityField& field);

class ForwardModel {
 public:
  ForwardModel(SceneGeometry geometry, ConductivityField conductivity, BoundaryCondition bc);

  const SceneGeometry& geometry() const { return geometry_; }
  const ConductivityField& conductivity() const { return conductivity_; }
  const BoundaryCondition& bc() const { return bc_; }
  bool is_cem() const { return std::holds_alternative<CemBoundary>(bc_); }

  // Scene for one medium realization (the interface radius may be random).
  SceneGeometry realized_geometry(const MediumRealization& m) const;

  ForwardModel without_inclusion() const;
  ForwardModel with_eps(double eps) const;
  ForwardModel with_bc(BoundaryCondition bc) const;

 private:
  SceneGeometry geometry_;
  ConductivityField conductivity_;
  BoundaryCondition bc_;
};

}  // namespace prwos
