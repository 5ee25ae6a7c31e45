#include "prwos/variance_reduction.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace prwos {

ControlVariateProvider make_reference_provider(const ForwardModel& model, int K) {
  if (model.conductivity().random()) {
    throw std::invalid_argument("reference control variate needs a deterministic medium; use a nested walk");
  }
  auto sol = solve_cem(model.without_inclusion(), K).solution;
  return ReferenceSolution{std::make_shared<const FourierSolution>(std::move(sol))};
}

double cv_value(const ControlVariateProvider& provider, Point point,
                const SceneGeometry& no_inclusion_geometry, const BoundaryCondition& bc,
                const MediumRealization& medium, const WalkParams& params,
                const StreamKey& parent, std::uint64_t first_nest_id) {
  if (const auto* a = std::get_if<AnalyticFourier>(&provider)) return a->solution->evaluate(point);
  if (const auto* r = std::get_if<ReferenceSolution>(&provider)) return r->solution->evaluate(point);
  const auto& nw = std::get<NestedWalk>(provider);
  if (nw.k < 1) throw std::invalid_argument("nested walk needs k >= 1");
  WalkParams p = params;
  p.chain_mode = ChainMode::DirectChain;
  p.sampler = nw.sampler;
  p.stop_at_first_hit = false;
  double sum = 0.0;
  int used = 0;
  for (int j = 0; j < nw.k; ++j) {
    StreamKey key = parent;
    key.nest_level = kNestContinuation;
    key.nest_id = first_nest_id + static_cast<std::uint64_t>(j);
    Stream rng(key);
    const auto out = simulate(point, no_inclusion_geometry, bc, medium, p, ScoreKind::V, rng);
    if (out.terminal == Terminal::Censored) continue;
    sum += out.score_sum;
    ++used;
  }
  if (used == 0) throw CensoringError("all nested trajectories reached max_steps");
  return sum / used;
}

namespace {

VRSample vr_sample_impl(Point x0, double start_value, const SceneGeometry& geometry,
                        const CemBoundary& cem, const MediumRealization& medium,
                        const WalkParams& params, const ControlVariateProvider& provider,
                        Stream& rng, bool nested_start) {
  if (!geometry.inclusion()) throw std::invalid_argument("variance reduction needs an inclusion");
  WalkParams p = params;
  p.chain_mode = ChainMode::ThroughChain;
  p.stop_at_first_hit = true;
  const BoundaryCondition bc = cem;
  const auto out = simulate(x0, geometry, bc, medium, p, ScoreKind::V, rng);
  VRSample s;
  if (out.terminal == Terminal::Censored) {
    s.censored = true;
    return s;
  }
  const double scale = cem.layout.electrode_length() / cem.z;
  const auto* nw = std::get_if<NestedWalk>(&provider);
  const std::uint64_t tau_nest = nested_start && nw ? static_cast<std::uint64_t>(nw->k) : 0;
  double v_tau = 0.0;
  if (out.terminal == Terminal::HitInclusion) {
    s.hit = true;
    s.hit_point = out.point;
    v_tau = cv_value(provider, out.point, geometry.without_inclusion(), bc, medium, params,
                     rng.key(), tau_nest);
  }
  s.eta_hat_0 = scale * (start_value - v_tau);
  s.eta_hat_1 = s.hit ? scale : 0.0;
  return s;
}

}  // namespace

VRSample vr_sample(Point x0, double start_value, const SceneGeometry& geometry,
                   const CemBoundary& cem, const MediumRealization& medium,
                   const WalkParams& params, const ControlVariateProvider& provider, Stream& rng) {
  return vr_sample_impl(x0, start_value, geometry, cem, medium, params, provider, rng, false);
}

CurrentEstimate estimate_currents_vr(const ForwardModel& model, const WalkParams& params,
                                     const DoubleRandomizationPlan& plan,
                                     const ControlVariateProvider& provider,
                                     const RunOptions& options, const VROptions& vr) {
  const auto& cem = require_cem(model.bc());
  if (!model.geometry().inclusion()) throw std::invalid_argument("variance reduction needs an inclusion");
  if (plan.M1 == 0 || plan.M2 == 0) throw std::invalid_argument("M1 and M2 must be at least 1");
  const bool random = model.conductivity().random();
  if (random && !std::holds_alternative<NestedWalk>(provider)) {
    throw std::invalid_argument("random media support only nested-walk control variates");
  }
  const std::size_t N = cem.layout.count();
  std::vector<double> means = vr.electrode_means;
  if (vr.start_term == StartTerm::ElectrodeMean && means.empty()) {
    if (const auto* r = std::get_if<ReferenceSolution>(&provider)) {
      for (std::size_t l = 0; l < N; ++l) {
        const auto& a = cem.layout.arc(l);
        means.push_back(r->solution->trace_integral(a.center_angle - a.half_width,
                                                    a.center_angle + a.half_width) /
                        (2.0 * a.half_width));
      }
    } else {
      means = no_inclusion_electrode_means(model, vr.reference_modes);
    }
  }
  if (vr.start_term == StartTerm::ElectrodeMean && means.size() != N) {
    throw std::invalid_argument("one electrode mean per electrode required");
  }

  const std::uint64_t per = plan.per_electrode();
  const std::uint64_t total = per * N;
  const std::uint64_t nblocks = (total + options.block_size - 1) / options.block_size;
  struct Block {
    std::vector<PairMoments> eta;
    double cpu = 0.0;
    std::uint64_t censored = 0, hits = 0;
  };
  std::vector<Block> blocks(nblocks);
  const auto t0 = std::chrono::steady_clock::now();
  const MediumRealization nominal = nominal_medium(model.conductivity());
  const SceneGeometry nominal_geom = model.realized_geometry(nominal);
  const auto* nw = std::get_if<NestedWalk>(&provider);
  for_each_block(total, options.block_size, options.workers,
                 [&](std::uint64_t begin, std::uint64_t end, std::size_t slot) {
                   const double c0 = thread_cpu_seconds();
                   Block b;
                   b.eta.resize(N);
                   for (std::uint64_t i = begin; i < end; ++i) {
                     const std::size_t l = static_cast<std::size_t>(i / per);
                     const std::uint64_t j = i % per;
                     const std::uint64_t m2 = j / plan.M1, m1 = j % plan.M1;
                     Stream start_rng(start_key(options.seed, l, m2, plan));
                     const Point x0 = cem.layout.sample_on_electrode(l, start_rng);
                     Stream rng(trajectory_key(options.seed, l, m2, m1, plan));
                     const MediumRealization m =
                         random ? sample_medium(model.conductivity(), rng) : nominal;
                     const SceneGeometry geom = random ? model.realized_geometry(m) : nominal_geom;
                     double start = 0.0;
                     bool nested_start = false;
                     if (vr.start_term == StartTerm::ElectrodeMean) {
                       start = means[l];
                     } else {
                       start = cv_value(provider, x0, geom.without_inclusion(), model.bc(), m, params,
                                        rng.key(), 0);
                       nested_start = nw != nullptr;
                     }
                     const auto s = vr_sample_impl(x0, start, geom, cem, m, params, provider, rng,
                                                   nested_start);
                     if (s.censored) {
                       ++b.censored;
                       continue;
                     }
                     b.hits += s.hit ? 1 : 0;
                     b.eta[l].add(s.eta_hat_0, s.eta_hat_1);
                   }
                   b.cpu = thread_cpu_seconds() - c0;
                   blocks[slot] = std::move(b);
                 });
  std::vector<PairMoments> eta(N);
  double cpu = 0.0;
  std::uint64_t censored = 0, hits = 0;
  for (const auto& b : blocks) {
    for (std::size_t l = 0; l < N; ++l) eta[l] = merge(eta[l], b.eta[l]);
    cpu += b.cpu;
    censored += b.censored;
    hits += b.hits;
  }
  if (static_cast<double>(censored) > options.max_censored_fraction * static_cast<double>(total)) {
    throw CensoringError(std::to_string(censored) + " of " + std::to_string(total) +
                         " trajectories reached max_steps");
  }
  auto est = assemble_currents(cem, std::move(eta), true);
  est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  est.cpu_time = cpu;
  est.censored = censored;
  est.hits = hits;
  return est;
}

}  // namespace prwos
