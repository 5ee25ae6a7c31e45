#include "prwos/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace prwos {

double default_eps(double h) { return std::min(1e-6, h * h * h); }

Point sphere_exit_centered(Point p, double radius, Stream& rng) {
  return p + isotropic_unit_vector(rng) * radius;
}

double uncentered_exit_angle(double theta, double ratio, double u) {
  if (u == 0.5) return theta + kPi;
  return theta + 2.0 * std::atan(ratio * std::tan(kPi * u));
}

Point sphere_exit_uncentered(const Circle& disk, Point p, Stream& rng) {
  const Point d = p - disk.center;
  const double r = d.norm();
  if (!(r < disk.radius)) throw std::invalid_argument("uncentered exit needs a point strictly inside the disk");
  const double theta = r > 0.0 ? std::atan2(d.y, d.x) : 0.0;
  const double ratio = (disk.radius - r) / (disk.radius + r);
  const double a = uncentered_exit_angle(theta, ratio, rng.uniform());
  return disk.center + Point{std::cos(a), std::sin(a)} * disk.radius;
}

namespace {

// q stays on p's side of the circle (points on the circle count as either).
bool same_side(double rp, double rq, double radius) {
  return (rp - radius) * (rq - radius) >= 0.0;
}

struct Radii {
  Point center;
  double outer;
  double inclusion;  // negative when absent or ignored
  double interface;  // negative when absent
};

Radii radii_of(const SceneGeometry& g, bool ignore_inclusion) {
  return {g.center(), g.outer().radius,
          (g.inclusion() && !ignore_inclusion) ? g.inclusion()->radius : -1.0,
          g.interface() ? g.interface()->radius : -1.0};
}

// Stencil point admissible: inside the closed outer disk and not across the
// inclusion or interface circle as seen from the reference radius.
bool admissible(const Radii& rr, double r_ref, Point q) {
  const double rq = (q - rr.center).norm();
  if (rq > rr.outer) return false;
  if (rr.inclusion > 0.0 && !same_side(r_ref, rq, rr.inclusion)) return false;
  if (rr.interface > 0.0 && !same_side(r_ref, rq, rr.interface)) return false;
  return true;
}

}  // namespace

ReplacementAction boundary_replacement(Point p, const SceneGeometry& geometry,
                                       const BoundaryCondition& bc, double z_eff,
                                       const WalkParams& params, Stream& rng,
                                       bool ignore_inclusion) {
  const Circle& outer = geometry.outer();
  if (outer.radius - geometry.radial(p) > geometry.eps()) {
    throw std::logic_error("boundary replacement outside the boundary layer");
  }
  const Frame fr = project_with_frame(p, outer, NormalSide::TowardCenter);
  const Radii rr = radii_of(geometry, ignore_inclusion);
  const double rp = geometry.radial(p);
  double h = params.h;
  int halvings = 0;
  while (!(admissible(rr, rp, p + (fr.normal + fr.tangent) * h) &&
           admissible(rr, rp, p + (fr.normal - fr.tangent) * h) &&
           (p + fr.normal * (2.0 * h) - outer.center).norm() <= outer.radius)) {
    if (++halvings > kMaxHalvings) {
      throw std::logic_error("boundary stencil does not fit after " + std::to_string(kMaxHalvings) +
                             " halvings");
    }
    h *= 0.5;
  }
  const Point foot = fr.foot - outer.center;
  const double theta = std::atan2(foot.y, foot.x);
  const BoundaryData fg = boundary_fg(theta, bc);
  const double denom = fg.f * h + z_eff;
  const double score = h * fg.g / denom;
  const double pa = fg.f * h / denom;
  const double u = rng.uniform();
  if (u < pa) {
    Absorb a{score, std::nullopt};
    if (const auto* cem = std::get_if<CemBoundary>(&bc)) a.electrode = cem->layout.electrode_index(theta);
    return a;
  }
  const bool plus = (u - pa) < 0.5 * (1.0 - pa);
  const Point to = p + (fr.normal + (plus ? fr.tangent : fr.tangent * -1.0)) * h;
  return Move{to, score};
}

InterfaceSteps interface_steps(double h, double kappa_out, double kappa_in, InterfaceScheme scheme) {
  InterfaceSteps s;
  switch (scheme) {
    case InterfaceScheme::EqualFlux:
      s.h_out = h / kappa_in;
      s.h_in = h / kappa_out;
      break;
    case InterfaceScheme::EqualStep:
      s.h_out = h;
      s.h_in = h;
      break;
    case InterfaceScheme::SqrtScaled:
      s.h_out = h / std::sqrt(kappa_in);
      s.h_in = h / std::sqrt(kappa_out);
      break;
  }
  s.p_out = kappa_out * s.h_in / (kappa_out * s.h_in + kappa_in * s.h_out);
  return s;
}

Point interface_replacement(Point p, const SceneGeometry& geometry,
                            const MediumRealization& medium, const WalkParams& params,
                            Stream& rng, bool ignore_inclusion) {
  if (!geometry.interface()) throw std::logic_error("interface replacement without an interface");
  const Circle& sigma = *geometry.interface();
  if (std::abs(geometry.radial(p) - sigma.radius) > geometry.eps()) {
    throw std::logic_error("interface replacement outside the interface layer");
  }
  const Frame fr = project_with_frame(p, sigma, NormalSide::AwayFromCenter);
  const InterfaceSteps st =
      interface_steps(params.h, medium.kappa_outer, medium.kappa_inner, params.interface_scheme);
  Radii rr = radii_of(geometry, ignore_inclusion);
  rr.interface = -1.0;  // the stencil straddles the interface by design
  const double r_out = sigma.radius + geometry.eps();
  const double r_in = sigma.radius - geometry.eps();
  double scale = 1.0;
  int halvings = 0;
  auto fits = [&](double s) {
    const Point a = fr.normal * (s * st.h_out);
    const Point b = fr.normal * (-s * st.h_in);
    const Point ta = fr.tangent * (s * st.h_out);
    const Point tb = fr.tangent * (s * st.h_in);
    return admissible(rr, r_out, fr.foot + a + ta) && admissible(rr, r_out, fr.foot + a - ta) &&
           admissible(rr, r_in, fr.foot + b + tb) && admissible(rr, r_in, fr.foot + b - tb);
  };
  while (!fits(scale)) {
    if (++halvings > kMaxHalvings) {
      throw std::logic_error("interface stencil does not fit after " + std::to_string(kMaxHalvings) +
                             " halvings");
    }
    scale *= 0.5;
  }
  const double u = rng.uniform();
  if (u < st.p_out) {
    const double hs = scale * st.h_out;
    const bool plus = u < 0.5 * st.p_out;
    return fr.foot + (fr.normal + (plus ? fr.tangent : fr.tangent * -1.0)) * hs;
  }
  const double hs = scale * st.h_in;
  const bool plus = (u - st.p_out) < 0.5 * (1.0 - st.p_out);
  return fr.foot + (fr.normal * -1.0 + (plus ? fr.tangent : fr.tangent * -1.0)) * hs;
}

namespace {

Point project_onto(const Circle& c, Point p) {
  const Point d = p - c.center;
  const double r = d.norm();
  if (!(r > 0.0)) return c.center + Point{c.radius, 0.0};
  return c.center + d * (c.radius / r);
}

}  // namespace

TrajectoryOutcome simulate(Point start, const SceneGeometry& geometry, const BoundaryCondition& bc,
                           const MediumRealization& medium, const WalkParams& params,
                           ScoreKind kind, Stream& rng) {
  if (!(params.h > 0.0)) throw std::invalid_argument("step size h must be positive");
  const bool through = params.chain_mode == ChainMode::ThroughChain;
  // The inclusion bounds sphere radii and stencils until a ThroughChain has
  // visited it; afterwards that chain walks in the full disk.
  bool active = geometry.inclusion().has_value() && (through || kind != ScoreKind::V);
  const bool collect = kind != ScoreKind::U1;
  const double z_eff = contact_impedance(bc) * medium.kappa_outer;
  double inclusion_value = 0.0;
  if (kind == ScoreKind::IdealizedPotential) {
    const auto* robin = std::get_if<IdealizedRobin>(&bc);
    if (!robin) throw std::invalid_argument("IdealizedPotential score needs a Robin condition");
    inclusion_value = robin->inclusion_potential;
  }

  const Circle& outer = geometry.outer();
  const Point c = outer.center;
  const double R = outer.radius;
  const double eps = geometry.eps();
  const double rT = geometry.inclusion() ? geometry.inclusion()->radius : -1.0;
  const double rS = geometry.interface() ? geometry.interface()->radius : -1.0;
  const bool uncentered = params.sampler == Sampler::Uncentered;

  TrajectoryOutcome out;
  Point p = clamp_to_disk(start, outer);
  while (out.steps < params.max_steps) {
    ++out.steps;
    const double r = (p - c).norm();
    if (R - r <= eps) {
      ++out.boundary_hits;
      const auto act = boundary_replacement(p, geometry, bc, z_eff, params, rng, !active);
      if (const auto* a = std::get_if<Absorb>(&act)) {
        if (collect) out.score_sum += a->score;
        out.terminal = Terminal::AbsorbedAtElectrode;
        out.electrode = a->electrode;
        out.point = p;
        return out;
      }
      const auto& m = std::get<Move>(act);
      if (collect) out.score_sum += m.score;
      p = m.to;
      continue;
    }
    if (rT > 0.0 && r - rT <= eps) {
      const Point hit = project_onto(*geometry.inclusion(), p);
      if (active && !through) {
        out.score_sum += inclusion_value;
        out.terminal = Terminal::HitInclusion;
        out.point = hit;
        return out;
      }
      if (through && !out.first_hit) {
        out.first_hit = hit;
        active = false;
        if (params.stop_at_first_hit) {
          out.terminal = Terminal::HitInclusion;
          out.point = hit;
          return out;
        }
      }
    }
    if (rS > 0.0 && std::abs(r - rS) <= eps) {
      p = interface_replacement(p, geometry, medium, params, rng, !active);
      continue;
    }
    if (uncentered && !active) {
      if (rS < 0.0) {
        p = clamp_to_disk(sphere_exit_uncentered(outer, p, rng), outer);
        continue;
      }
      if (r < rS) {
        p = sphere_exit_uncentered(*geometry.interface(), p, rng);
        continue;
      }
    }
    double d = R - r;
    if (active) d = std::min(d, r - rT);
    if (rS > 0.0) d = std::min(d, std::abs(r - rS));
    p = clamp_to_disk(sphere_exit_centered(p, d, rng), outer);
  }
  out.terminal = Terminal::Censored;
  out.point = p;
  return out;
}

double simulate_dirichlet(Point start, const SceneGeometry& geometry,
                          const std::function<double(Point)>& phi, Sampler sampler, Stream& rng) {
  const Circle& outer = geometry.outer();
  Point p = clamp_to_disk(start, outer);
  for (;;) {
    const double d = outer.radius - (p - outer.center).norm();
    if (d <= geometry.eps()) return phi(project_onto(outer, p));
    if (sampler == Sampler::Uncentered) return phi(sphere_exit_uncentered(outer, p, rng));
    p = clamp_to_disk(sphere_exit_centered(p, d, rng), outer);
  }
}

}  // namespace prwos
