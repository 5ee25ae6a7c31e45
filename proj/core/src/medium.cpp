#include "prwos/medium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "prwos/rng.hpp"

namespace prwos {

double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (a <= -kPi) a += kTwoPi;
  return a;
}

ElectrodeLayout::ElectrodeLayout(std::vector<ElectrodeArc> arcs, double outer_radius)
    : arcs_(std::move(arcs)), radius_(outer_radius) {
  if (arcs_.empty()) throw std::invalid_argument("electrode layout needs at least one electrode");
  if (!(radius_ > 0.0)) throw std::invalid_argument("outer radius must be positive");
  const double w = arcs_.front().half_width;
  for (const auto& a : arcs_) {
    if (!(a.half_width > 0.0)) throw std::invalid_argument("electrode half width must be positive");
    if (std::abs(a.half_width - w) > 1e-12) {
      throw std::invalid_argument("all electrodes must have the same width");
    }
  }
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    for (std::size_t j = i + 1; j < arcs_.size(); ++j) {
      const double sep = std::abs(wrap_angle(arcs_[i].center_angle - arcs_[j].center_angle));
      if (!(sep > arcs_[i].half_width + arcs_[j].half_width)) {
        throw std::invalid_argument("electrode arcs must be pairwise disjoint");
      }
    }
  }
}

ElectrodeLayout ElectrodeLayout::equispaced(std::size_t count, double arc_length,
                                            double first_center, double outer_radius) {
  std::vector<ElectrodeArc> arcs(count);
  const double half = 0.5 * arc_length / outer_radius;
  for (std::size_t l = 0; l < count; ++l) {
    arcs[l].center_angle = wrap_angle(first_center - kTwoPi * static_cast<double>(l) /
                                                         static_cast<double>(count));
    arcs[l].half_width = half;
  }
  return ElectrodeLayout(std::move(arcs), outer_radius);
}

ElectrodeLayout ElectrodeLayout::standard_eight() { return equispaced(8, 0.1); }

std::optional<std::size_t> ElectrodeLayout::electrode_index(double theta) const {
  for (std::size_t l = 0; l < arcs_.size(); ++l) {
    if (std::abs(wrap_angle(theta - arcs_[l].center_angle)) <= arcs_[l].half_width) return l;
  }
  return std::nullopt;
}

Point ElectrodeLayout::point_on_electrode(std::size_t l, double u) const {
  const auto& a = arcs_.at(l);
  const double theta = a.center_angle - a.half_width + 2.0 * a.half_width * u;
  return {radius_ * std::cos(theta), radius_ * std::sin(theta)};
}

Point ElectrodeLayout::sample_on_electrode(std::size_t l, Stream& rng) const {
  return point_on_electrode(l, rng.uniform());
}

VoltagePattern::VoltagePattern(std::vector<double> voltages) : u_(std::move(voltages)) {
  if (u_.empty()) throw std::invalid_argument("voltage pattern is empty");
  const double sum = std::accumulate(u_.begin(), u_.end(), 0.0);
  if (std::abs(sum) > 1e-12) {
    throw std::invalid_argument("voltage pattern must sum to zero (ground condition)");
  }
}

VoltagePattern VoltagePattern::alternating(std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (i % 2 == 0) ? -1.0 : 1.0;  // j = i+1
  return VoltagePattern(std::move(u));
}

double IdealizedRobin::evaluate_phi(double theta) const {
  double s = 0.0;
  for (const auto& t : phi) {
    const double kt = t.k * theta;
    s += t.a * std::cos(kt) + t.b * std::sin(kt);
  }
  return s;
}

BoundaryData boundary_fg(double theta, const BoundaryCondition& bc) {
  if (const auto* robin = std::get_if<IdealizedRobin>(&bc)) {
    return {1.0, robin->evaluate_phi(theta)};
  }
  const auto& cem = std::get<CemBoundary>(bc);
  if (auto l = cem.layout.electrode_index(theta)) return {1.0, cem.pattern[*l]};
  return {0.0, 0.0};
}

double contact_impedance(const BoundaryCondition& bc) {
  return std::visit([](const auto& b) { return b.z; }, bc);
}

const CemBoundary& require_cem(const BoundaryCondition& bc) {
  const auto* cem = std::get_if<CemBoundary>(&bc);
  if (!cem) throw std::invalid_argument("operation requires a complete electrode model");
  return *cem;
}

bool ConductivityField::random() const {
  return outer.random() || inner.random() || (interface_radius && interface_radius->random());
}

namespace {

double draw(const Parameter& p, Stream& rng) {
  if (!p.random()) return p.lo;
  return p.lo + (p.hi - p.lo) * rng.uniform();
}

void check_parameter(const Parameter& p, const char* what) {
  if (!(p.lo > 0.0) || !(p.hi >= p.lo) || !std::isfinite(p.hi)) {
    throw std::invalid_argument(std::string(what) + " must be positive with ordered bounds");
  }
}

}  // namespace

MediumRealization sample_medium(const ConductivityField& field, Stream& rng) {
  MediumRealization m;
  m.kappa_outer = draw(field.outer, rng);
  m.kappa_inner = draw(field.inner, rng);
  m.interface_radius = field.interface_radius ? draw(*field.interface_radius, rng) : 0.0;
  return m;
}

MediumRealization nominal_medium(const ConductivityField& field) {
  MediumRealization m;
  m.kappa_outer = field.outer.mean();
  m.kappa_inner = field.inner.mean();
  m.interface_radius = field.interface_radius ? field.interface_radius->mean() : 0.0;
  return m;
}

ForwardModel::ForwardModel(SceneGeometry geometry, ConductivityField conductivity,
                           BoundaryCondition bc)
    : geometry_(std::move(geometry)), conductivity_(conductivity), bc_(std::move(bc)) {
  check_parameter(conductivity_.outer, "outer conductivity");
  check_parameter(conductivity_.inner, "inner conductivity");
  if (geometry_.interface().has_value() != conductivity_.interface_radius.has_value()) {
    throw std::invalid_argument("interface presence differs between geometry and conductivity");
  }
  if (!geometry_.interface() && (conductivity_.inner.random() ||
                                 conductivity_.inner.lo != conductivity_.outer.lo ||
                                 conductivity_.inner.hi != conductivity_.outer.hi)) {
    throw std::invalid_argument("inner conductivity without an interface must equal the outer one");
  }
  if (conductivity_.interface_radius) {
    check_parameter(*conductivity_.interface_radius, "interface radius");
    // Every radius in the support must give a valid scene.
    (void)geometry_.with_interface_radius(conductivity_.interface_radius->lo);
    (void)geometry_.with_interface_radius(conductivity_.interface_radius->hi);
  }
  if (!(contact_impedance(bc_) > 0.0)) throw std::invalid_argument("contact impedance must be positive");
  if (const auto* cem = std::get_if<CemBoundary>(&bc_)) {
    if (cem->layout.count() != cem->pattern.size()) {
      throw std::invalid_argument("voltage pattern size differs from electrode count");
    }
    if (std::abs(cem->layout.outer_radius() - geometry_.outer().radius) > 1e-14) {
      throw std::invalid_argument("electrodes must sit on the outer circle");
    }
  }
}

SceneGeometry ForwardModel::realized_geometry(const MediumRealization& m) const {
  if (!geometry_.interface()) return geometry_;
  return geometry_.with_interface_radius(m.interface_radius);
}

ForwardModel ForwardModel::without_inclusion() const {
  return ForwardModel(geometry_.without_inclusion(), conductivity_, bc_);
}

ForwardModel ForwardModel::with_eps(double eps) const {
  return ForwardModel(geometry_.with_eps(eps), conductivity_, bc_);
}

ForwardModel ForwardModel::with_bc(BoundaryCondition bc) const {
  return ForwardModel(geometry_, conductivity_, std::move(bc));
}

}  // namespace prwos
