#pragma once

#include <cmath>
#include <optional>
#include <string_view>

namespace prwos {

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Point&) const = default;

  double norm() const { return std::sqrt(x * x + y * y); }
  constexpr double dot(Point o) const { return x * o.x + y * o.y; }
};

constexpr Point operator*(double s, Point p) { return p * s; }

inline double distance(Point a, Point b) { return (a - b).norm(); }

struct Circle {
  Point center;
  double radius = 1.0;

  Circle() = default;
  Circle(Point c, double r);
};

enum class Region {
  BulkOuter,       // between the interface and the outer boundary layer
  BulkInner,       // inside the interface (or anywhere when there is none)
  BoundaryLayer,
  InclusionLayer,
  InterfaceLayer,
  InsideInclusion,
};

std::string_view to_string(Region r);

inline bool is_bulk(Region r) {
  return r == Region::BulkOuter || r == Region::BulkInner;
}

// Which side of a circle the returned normal points into.
enum class NormalSide { TowardCenter, AwayFromCenter };

struct Frame {
  Point foot;
  Point normal;   // unit, into the requested side
  Point tangent;  // unit, counterclockwise about the circle center
};

Frame project_with_frame(Point p, const Circle& c, NormalSide side);

// Concentric scene: the outer disk D, an optional perfectly conducting
// inclusion T and an optional conductivity interface, each with an
// eps-layer. The constructor enforces concentricity, radius ordering and
// eps < half of the smallest gap between circles.
class SceneGeometry {
 public:
  SceneGeometry(Circle outer, std::optional<Circle> inclusion,
                std::optional<Circle> interface, double eps);

  const Circle& outer() const { return outer_; }
  const std::optional<Circle>& inclusion() const { return inclusion_; }
  const std::optional<Circle>& interface() const { return interface_; }
  double eps() const { return eps_; }
  Point center() const { return outer_.center; }

  // Smallest radial gap between any two circles of the scene.
  double min_gap() const;

  SceneGeometry with_eps(double eps) const;
  SceneGeometry without_inclusion() const;
  SceneGeometry with_interface_radius(double radius) const;

  Region classify(Point p) const;

  // Radius of the largest disk about p that crosses no circle. When
  // ignore_inclusion is set the inclusion circle does not limit the radius.
  double walk_radius(Point p, bool ignore_inclusion = false) const;

  // Radial position about the scene center.
  double radial(Point p) const { return distance(p, outer_.center); }

 private:
  Circle outer_;
  std::optional<Circle> inclusion_;
  std::optional<Circle> interface_;
  double eps_;
};

// Maximum distance outside the outer circle that is still treated as
// floating-point overshoot and clamped back.
inline constexpr double kClampTolerance = 1e-12;

// Radially clamps p onto the outer circle when it lies outside by at most
// kClampTolerance; throws std::logic_error for larger excursions.
Point clamp_to_disk(Point p, const Circle& outer);

}  // namespace prwos
