#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "prwos/medium.hpp"
#include "prwos/stats.hpp"
#include "prwos/walk.hpp"

namespace prwos {

// M2 starting points per electrode, M1 chains per starting point.
struct DoubleRandomizationPlan {
  std::uint64_t M1 = 1;
  std::uint64_t M2 = 1;

  std::uint64_t per_electrode() const { return M1 * M2; }
};

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t block_size = 4096;
  // Estimate c from a second, independent ensemble.
  bool independent_c = false;
  // Fraction of censored trajectories above which a run fails.
  double max_censored_fraction = 1e-6;
};

// Thrown when too many trajectories hit max_steps.
struct CensoringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Work split into fixed blocks of consecutive indices. fn(begin, end, slot)
// runs one block; blocks are distributed over workers, but results are
// always consumed in block order, so output does not depend on the worker
// count.
void for_each_block(std::uint64_t n, std::uint64_t block_size, unsigned workers,
                    const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& fn);

// CPU time of the calling thread in seconds.
double thread_cpu_seconds();

enum class XiKind { U0, U1 };

struct XiEstimate {
  std::size_t electrode = 0;
  XiKind kind = XiKind::U0;
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t n = 0;
};

struct ElectrodeStats {
  double mean = 0.0;      // J_l
  double variance = 0.0;  // per-sample variance of the J_l summand
  std::uint64_t n = 0;
};

struct CurrentEstimate {
  std::vector<double> J;
  double c_hat = 0.0;
  double charge_residual = 0.0;
  std::vector<ElectrodeStats> per_electrode;
  // Raw per-electrode moments of (eta_0, eta_1).
  std::vector<PairMoments> eta;
  double wall_time = 0.0;
  double cpu_time = 0.0;  // summed over blocks, excluding precomputation
  std::uint64_t censored = 0;
  std::uint64_t hits = 0;  // trajectories that reached the inclusion

  double std_error(std::size_t l) const;
};

// Starting point stream for (electrode, m2); shared by the M1 inner chains.
StreamKey start_key(std::uint64_t seed, std::size_t electrode, std::uint64_t m2,
                    const DoubleRandomizationPlan& plan);
// Trajectory stream for (electrode, m2, m1).
StreamKey trajectory_key(std::uint64_t seed, std::size_t electrode, std::uint64_t m2,
                         std::uint64_t m1, const DoubleRandomizationPlan& plan);

// One (eta_0, eta_1) sample of the direct method: uniform start on E_l, a
// medium draw when the conductivity is random, then a DirectChain trajectory
// whose scores give eta_0 and whose inclusion hit gives eta_1.
struct EtaSample {
  double eta0 = 0.0;
  double eta1 = 0.0;
  bool hit = false;
  bool censored = false;
};

EtaSample direct_sample(const ForwardModel& model, const WalkParams& params, std::size_t electrode,
                        std::uint64_t m2, std::uint64_t m1, const DoubleRandomizationPlan& plan,
                        std::uint64_t seed);

XiEstimate estimate_xi(std::size_t electrode, XiKind kind, const ForwardModel& model,
                       const WalkParams& params, const DoubleRandomizationPlan& plan,
                       const RunOptions& options);

// Ratio estimator of the inclusion potential from charge conservation.
// Throws when the denominator is within three standard errors of zero.
double estimate_c(const std::vector<XiEstimate>& xi0, const std::vector<XiEstimate>& xi1,
                  const CemBoundary& cem);

// J_l = U_l/z - (xi_{l,0} + c xi_{l,1}) / |E| from per-electrode eta moments.
// c_override skips the ratio estimator (used with an independent ensemble).
CurrentEstimate assemble_currents(const CemBoundary& cem, std::vector<PairMoments> eta,
                                  bool has_inclusion, std::optional<double> c_override = {});

CurrentEstimate estimate_currents(const ForwardModel& model, const WalkParams& params,
                                  const DoubleRandomizationPlan& plan, const RunOptions& options);

struct PotentialEstimate {
  RunningMoments moments;
  double mean_boundary_hits = 0.0;
  double wall_time = 0.0;
  double cpu_time = 0.0;
  std::uint64_t censored = 0;
};

// Point value of the potential (any boundary condition) with n trajectories.
PotentialEstimate estimate_potential(Point x, const ForwardModel& model, const WalkParams& params,
                                     ScoreKind kind, std::uint64_t n, const RunOptions& options,
                                     std::optional<MediumRealization> medium = std::nullopt);

}  // namespace prwos
