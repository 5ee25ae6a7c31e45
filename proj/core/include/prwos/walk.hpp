#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>

#include "prwos/geometry.hpp"
#include "prwos/medium.hpp"
#include "prwos/rng.hpp"

namespace prwos {

enum class Sampler { Centered, Uncentered };

// Step sizes on the two sides of the conductivity interface.
enum class InterfaceScheme {
  EqualFlux,   // h_out = h / kappa_in, h_in = h / kappa_out: both sides equally likely
  EqualStep,   // h_out = h_in = h
  SqrtScaled,  // h_out = h / sqrt(kappa_in), h_in = h / sqrt(kappa_out)
};

enum class ChainMode {
  DirectChain,   // state space excludes the inclusion; absorbed in its eps-layer
  ThroughChain,  // walks through the inclusion, recording the first visit
};

enum class ScoreKind {
  U0,                  // CEM data, inclusion held at 0
  U1,                  // zero boundary data, inclusion held at 1 (credit added by the caller)
  V,                   // CEM data, inclusion ignored
  IdealizedPotential,  // Robin data phi, inclusion held at its prescribed potential
};

struct WalkParams {
  double h = 0.004;
  Sampler sampler = Sampler::Centered;
  InterfaceScheme interface_scheme = InterfaceScheme::EqualStep;
  ChainMode chain_mode = ChainMode::DirectChain;
  std::uint64_t max_steps = 10'000'000;
  // ThroughChain only: stop at the first visit of the inclusion layer.
  bool stop_at_first_hit = false;
};

// min(1e-6, h^3).
double default_eps(double h);

// Replacements halve their step at most this often before giving up.
inline constexpr int kMaxHalvings = 6;

struct Absorb {
  double score = 0.0;  // collected at this visit before absorption
  std::optional<std::size_t> electrode;
};

struct Move {
  Point to;
  double score = 0.0;  // collected at this visit
};

using ReplacementAction = std::variant<Absorb, Move>;

enum class Terminal { AbsorbedAtElectrode, HitInclusion, Censored };

struct TrajectoryOutcome {
  double score_sum = 0.0;
  Terminal terminal = Terminal::Censored;
  std::optional<std::size_t> electrode;  // set for absorption on a CEM electrode
  Point point;                           // absorption point or projected hit point
  std::uint64_t boundary_hits = 0;
  std::uint64_t steps = 0;
  // ThroughChain: first visit of the inclusion, projected onto its circle.
  std::optional<Point> first_hit;
};

Point sphere_exit_centered(Point p, double radius, Stream& rng);

// Exit point of Brownian motion started at p from the disk, sampled exactly
// from the Poisson kernel.
Point sphere_exit_uncentered(const Circle& disk, Point p, Stream& rng);
// Exit angle about the disk center for uniform u; exposed for tests.
double uncentered_exit_angle(double theta, double ratio, double u);

// Partially reflecting step at a point of the boundary layer. z_eff is the
// contact impedance times the outer conductivity. Scores are the per-visit
// collision scores h' g / (f h' + z_eff).
ReplacementAction boundary_replacement(Point p, const SceneGeometry& geometry,
                                       const BoundaryCondition& bc, double z_eff,
                                       const WalkParams& params, Stream& rng,
                                       bool ignore_inclusion = false);

struct InterfaceSteps {
  double h_out = 0.0;
  double h_in = 0.0;
  double p_out = 0.5;  // probability of moving to the outer side
};

InterfaceSteps interface_steps(double h, double kappa_out, double kappa_in, InterfaceScheme scheme);

Point interface_replacement(Point p, const SceneGeometry& geometry,
                            const MediumRealization& medium, const WalkParams& params,
                            Stream& rng, bool ignore_inclusion = false);

// geometry must be the realized scene for the medium.
TrajectoryOutcome simulate(Point start, const SceneGeometry& geometry, const BoundaryCondition& bc,
                           const MediumRealization& medium, const WalkParams& params,
                           ScoreKind kind, Stream& rng);

// Plain walk on spheres for the Dirichlet problem on the outer circle:
// scores phi at the projection once the eps-layer is reached.
double simulate_dirichlet(Point start, const SceneGeometry& geometry,
                          const std::function<double(Point)>& phi, Sampler sampler, Stream& rng);

}  // namespace prwos
