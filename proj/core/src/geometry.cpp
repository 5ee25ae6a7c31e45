#include "prwos/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace prwos {

namespace {

bool concentric(const Circle& a, const Circle& b) {
  return distance(a.center, b.center) <= 1e-14 * std::max(1.0, a.radius);
}

}  // namespace

Circle::Circle(Point c, double r) : center(c), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("circle radius must be positive and finite");
  }
  if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
    throw std::invalid_argument("circle center must be finite");
  }
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::BulkOuter: return "BulkOuter";
    case Region::BulkInner: return "BulkInner";
    case Region::BoundaryLayer: return "BoundaryLayer";
    case Region::InclusionLayer: return "InclusionLayer";
    case Region::InterfaceLayer: return "InterfaceLayer";
    case Region::InsideInclusion: return "InsideInclusion";
  }
  return "?";
}

Frame project_with_frame(Point p, const Circle& c, NormalSide side) {
  const Point d = p - c.center;
  const double r = d.norm();
  if (!(r > 0.0)) {
    throw std::invalid_argument("projection onto a circle is undefined at its center");
  }
  const Point radial{d.x / r, d.y / r};
  Frame f;
  f.foot = c.center + radial * c.radius;
  f.normal = side == NormalSide::TowardCenter ? radial * -1.0 : radial;
  f.tangent = {-radial.y, radial.x};
  return f;
}

SceneGeometry::SceneGeometry(Circle outer, std::optional<Circle> inclusion,
                             std::optional<Circle> interface, double eps)
    : outer_(outer), inclusion_(inclusion), interface_(interface), eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (inclusion_) {
    if (!concentric(outer_, *inclusion_)) {
      throw std::invalid_argument("inclusion must be concentric with the outer disk");
    }
    if (!(inclusion_->radius < outer_.radius)) {
      throw std::invalid_argument("inclusion must lie strictly inside the outer disk");
    }
  }
  if (interface_) {
    if (!concentric(outer_, *interface_)) {
      throw std::invalid_argument("interface must be concentric with the outer disk");
    }
    if (!(interface_->radius < outer_.radius)) {
      throw std::invalid_argument("interface must lie strictly inside the outer disk");
    }
    if (inclusion_ && !(inclusion_->radius < interface_->radius)) {
      throw std::invalid_argument("inclusion radius must be smaller than interface radius");
    }
  }
  const double gap = min_gap();
  if (!(eps_ < 0.5 * gap)) {
    throw std::invalid_argument("eps must be smaller than half the minimal gap between circles (gap " +
                                std::to_string(gap) + ")");
  }
}

double SceneGeometry::min_gap() const {
  double gap = outer_.radius;  // distance from the center for a plain disk
  double inner = 0.0;
  if (inclusion_) {
    inner = inclusion_->radius;
    gap = inclusion_->radius;
  }
  if (interface_) {
    gap = std::min(gap, interface_->radius - inner);
    inner = interface_->radius;
  }
  gap = std::min(gap, outer_.radius - inner);
  return gap;
}

SceneGeometry SceneGeometry::with_eps(double eps) const {
  return SceneGeometry(outer_, inclusion_, interface_, eps);
}

SceneGeometry SceneGeometry::without_inclusion() const {
  return SceneGeometry(outer_, std::nullopt, interface_, eps_);
}

SceneGeometry SceneGeometry::with_interface_radius(double radius) const {
  if (!interface_) throw std::logic_error("scene has no interface");
  return SceneGeometry(outer_, inclusion_, Circle(outer_.center, radius), eps_);
}

Region SceneGeometry::classify(Point p) const {
  const double r = radial(p);
  if (outer_.radius - r <= eps_) return Region::BoundaryLayer;
  if (inclusion_) {
    const double d = r - inclusion_->radius;
    if (std::abs(d) <= eps_) return Region::InclusionLayer;
    if (d < 0.0) return Region::InsideInclusion;
  }
  if (interface_) {
    const double d = r - interface_->radius;
    if (std::abs(d) <= eps_) return Region::InterfaceLayer;
    return d > 0.0 ? Region::BulkOuter : Region::BulkInner;
  }
  return Region::BulkInner;
}

double SceneGeometry::walk_radius(Point p, bool ignore_inclusion) const {
  const double r = radial(p);
  double d = outer_.radius - r;
  if (inclusion_ && !ignore_inclusion) d = std::min(d, std::abs(r - inclusion_->radius));
  if (interface_) d = std::min(d, std::abs(r - interface_->radius));
  return d;
}

Point clamp_to_disk(Point p, const Circle& outer) {
  const Point d = p - outer.center;
  const double r = d.norm();
  if (r <= outer.radius) return p;
  if (r - outer.radius > kClampTolerance) {
    throw std::logic_error("walk escaped the outer disk by " + std::to_string(r - outer.radius));
  }
  return outer.center + d * (outer.radius / r);
}

}  // namespace prwos
