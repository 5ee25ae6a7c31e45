#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "prwos/estimators.hpp"
#include "prwos/reference_solver.hpp"

namespace prwos {

// Exact no-inclusion solution of an idealized Robin problem.
struct AnalyticFourier {
  std::shared_ptr<const FourierSolution> solution;
};

// No-inclusion CEM solution from the reference solver.
struct ReferenceSolution {
  std::shared_ptr<const FourierSolution> solution;
};

// v estimated on the fly by k independent no-inclusion walks.
struct NestedWalk {
  int k = 10;
  Sampler sampler = Sampler::Uncentered;
};

using ControlVariateProvider = std::variant<AnalyticFourier, ReferenceSolution, NestedWalk>;

ControlVariateProvider make_reference_provider(const ForwardModel& model, int K = 256);

// How v(x0) at the uniform starting point enters the estimator.
enum class StartTerm {
  ElectrodeMean,  // exact mean of v over the electrode (conditional expectation)
  Pointwise,      // v evaluated (or walked) at the sampled x0
};

struct VRSample {
  double eta_hat_0 = 0.0;
  double eta_hat_1 = 0.0;
  bool hit = false;
  std::optional<Point> hit_point;
  bool censored = false;
};

// v at a point. Fourier providers evaluate exactly; NestedWalk averages k
// no-inclusion trajectories with streams (parent seed/path, continuation
// level, nest ids first_nest_id..first_nest_id+k-1).
double cv_value(const ControlVariateProvider& provider, Point point,
                const SceneGeometry& no_inclusion_geometry, const BoundaryCondition& bc,
                const MediumRealization& medium, const WalkParams& params,
                const StreamKey& parent, std::uint64_t first_nest_id);

// One conditional sample: a score-free ThroughChain from x0 stopped at the
// first inclusion hit or absorption. start_value is v(x0) or its electrode
// mean; eta_hat_0 = (|E|/z)(start_value - 1{hit} v(x_tau)),
// eta_hat_1 = (|E|/z) 1{hit}.
VRSample vr_sample(Point x0, double start_value, const SceneGeometry& geometry,
                   const CemBoundary& cem, const MediumRealization& medium,
                   const WalkParams& params, const ControlVariateProvider& provider, Stream& rng);

struct VROptions {
  StartTerm start_term = StartTerm::ElectrodeMean;
  // Electrode means of v; computed from the reference solver when empty.
  std::vector<double> electrode_means;
  int reference_modes = 256;
};

CurrentEstimate estimate_currents_vr(const ForwardModel& model, const WalkParams& params,
                                     const DoubleRandomizationPlan& plan,
                                     const ControlVariateProvider& provider,
                                     const RunOptions& options, const VROptions& vr = {});

}  // namespace prwos
