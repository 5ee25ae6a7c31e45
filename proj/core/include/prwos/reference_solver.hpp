#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "prwos/geometry.hpp"
#include "prwos/medium.hpp"

namespace prwos {

// Condition imposed on the concentric core (the inclusion).
enum class CoreKind {
  None,       // no inclusion: innermost layer regular at the origin
  Floating,   // perfect conductor at an unknown constant with zero net flux
  Dirichlet,  // prescribed constant potential
};

struct CoreCondition {
  CoreKind kind = CoreKind::None;
  double value = 0.0;  // used by Dirichlet
};

struct RadialLayer {
  double r_in = 0.0;
  double r_out = 1.0;
  double kappa = 1.0;
};

// Layers from the core (or origin) outwards for one medium realization.
std::vector<RadialLayer> radial_layers(const SceneGeometry& geometry,
                                       const MediumRealization& medium);

// lambda_k such that d_r(mode k) = lambda_k * (mode k) at the outer radius,
// for the mode's homogeneous core condition. For k = 0 this is zero unless
// the core carries a Dirichlet condition.
double mode_dtn(int k, const MediumRealization& medium, const SceneGeometry& geometry,
                CoreKind core);

// Truncated series solution on a concentric scene: boundary trace
// coefficients plus stable per-layer radial profiles.
class FourierSolution {
 public:
  // Builds radial profiles for modes 0..K; a and b are trace coefficients
  // of size K+1.
  FourierSolution(int K, std::vector<RadialLayer> layers, CoreCondition core, double z,
                  std::vector<double> a, std::vector<double> b);

  int K() const { return K_; }
  double z() const { return z_; }
  double kappa_outer() const { return kappa_outer_; }
  const CoreCondition& core() const { return core_; }
  // Potential of the inclusion; 0 when there is none.
  double inclusion_constant() const;

  // Trace coefficients at r = 1: u(1,theta) = a_0 + sum a_k cos + b_k sin.
  const std::vector<double>& cos_coefficients() const { return a_; }
  const std::vector<double>& sin_coefficients() const { return b_; }
  const std::vector<double>& dtn() const { return lambda_; }

  double evaluate(Point p) const;
  double trace(double theta) const;
  // kappa_outer * d_r u at the outer radius.
  double boundary_flux(double theta) const;
  // Integral of the trace over [theta0, theta1] on the unit circle.
  double trace_integral(double theta0, double theta1) const;

  // Writes "k,layer,kind,p,q" rows: u_k(r) = p (r/r_out)^k + q (r_in/r)^k
  // per layer (k = 0 rows use a + b ln(r/r_in)).
  void write_coefficients_csv(std::ostream& os) const;

 private:
  int K_ = 0;
  double z_ = 1.0;
  double kappa_outer_ = 1.0;
  CoreCondition core_;
  double core_radius_ = 0.0;
  std::vector<RadialLayer> layers_;
  std::vector<double> lambda_;          // size K+1
  std::vector<double> a_, b_;           // size K+1, b_[0] unused
  std::vector<double> p_, q_;           // (K+1) x layers, k >= 1 profiles
  std::vector<double> w0_a_, w0_b_;     // k = 0 Dirichlet-core profile per layer

  std::size_t layer_of(double r) const;
  double k0_profile(std::size_t layer, double r) const;
};

// lambda_0..lambda_K for the given layers and core.
std::vector<double> dtn_spectrum(int K, const std::vector<RadialLayer>& layers, CoreKind core);

struct ReferenceCurrents {
  std::vector<double> J;
  double c = 0.0;
  double bc_residual = 0.0;
  // Per-electrode mean of the boundary potential, (1/|E|) int_{E_l} u.
  std::vector<double> electrode_mean;
};

struct CemSolveOptions {
  std::optional<MediumRealization> medium;  // default: nominal medium
  // Replaces the floating core by a Dirichlet value (u0/u1 problems).
  std::optional<double> core_dirichlet;
  double data_scale = 1.0;  // multiplies g; 0 gives the u1 problem
  int residual_points = 0;  // 0 means 16 K
};

FourierSolution solve_idealized(const ForwardModel& model, int K,
                                std::optional<MediumRealization> medium = std::nullopt);

struct CemSolution {
  FourierSolution solution;
  ReferenceCurrents currents;
};

// Galerkin solve of z kappa d_r u + f u = g in the trigonometric basis of
// size 2K+1 with exact arc integrals.
CemSolution solve_cem(const ForwardModel& model, int K, const CemSolveOptions& options = {});

// E over the medium distribution of the reference currents, by tensor
// 5-point Gauss-Legendre quadrature over the random parameters.
ReferenceCurrents expected_reference_currents(const ForwardModel& model, int K);

// Electrode means (1/|E|) int_{E_l} v of the no-inclusion solution,
// averaged over the medium distribution when it is random.
std::vector<double> no_inclusion_electrode_means(const ForwardModel& model, int K);

}  // namespace prwos
