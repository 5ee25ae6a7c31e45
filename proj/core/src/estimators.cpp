#include "prwos/estimators.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

namespace prwos {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void for_each_block(std::uint64_t n, std::uint64_t block_size, unsigned workers,
                    const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& fn) {
  if (block_size == 0) throw std::invalid_argument("block size must be positive");
  const std::uint64_t blocks = (n + block_size - 1) / block_size;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        const std::uint64_t begin = b * block_size;
        fn(begin, std::min(n, begin + block_size), static_cast<std::size_t>(b));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(blocks);
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

double CurrentEstimate::std_error(std::size_t l) const {
  const auto& s = per_electrode.at(l);
  return s.n > 1 ? std::sqrt(s.variance / static_cast<double>(s.n)) : 0.0;
}

namespace {

std::uint64_t path_base(std::size_t electrode, std::uint64_t m2, const DoubleRandomizationPlan& plan) {
  return static_cast<std::uint64_t>(electrode) * plan.per_electrode() + m2 * plan.M1;
}

StreamKey start_key_at(std::uint64_t seed, std::uint64_t offset, std::size_t electrode,
                       std::uint64_t m2, const DoubleRandomizationPlan& plan) {
  return {seed, offset + path_base(electrode, m2, plan), kNestStartPoint, 0};
}

StreamKey trajectory_key_at(std::uint64_t seed, std::uint64_t offset, std::size_t electrode,
                            std::uint64_t m2, std::uint64_t m1, const DoubleRandomizationPlan& plan) {
  return {seed, offset + path_base(electrode, m2, plan) + m1, kNestTrajectory, 0};
}

EtaSample direct_sample_at(const ForwardModel& model, const WalkParams& params,
                           std::size_t electrode, std::uint64_t m2, std::uint64_t m1,
                           const DoubleRandomizationPlan& plan, std::uint64_t seed,
                           std::uint64_t offset) {
  const auto& cem = require_cem(model.bc());
  Stream start_rng(start_key_at(seed, offset, electrode, m2, plan));
  const Point x0 = cem.layout.sample_on_electrode(electrode, start_rng);
  Stream rng(trajectory_key_at(seed, offset, electrode, m2, m1, plan));
  const bool random = model.conductivity().random();
  const MediumRealization m =
      random ? sample_medium(model.conductivity(), rng) : nominal_medium(model.conductivity());
  WalkParams p = params;
  p.chain_mode = ChainMode::DirectChain;
  const auto out = random ? simulate(x0, model.realized_geometry(m), model.bc(), m, p, ScoreKind::U0, rng)
                          : simulate(x0, model.geometry(), model.bc(), m, p, ScoreKind::U0, rng);
  EtaSample s;
  if (out.terminal == Terminal::Censored) {
    s.censored = true;
    return s;
  }
  const double scale = cem.layout.electrode_length() / cem.z;
  s.hit = out.terminal == Terminal::HitInclusion;
  s.eta0 = scale * out.score_sum;
  s.eta1 = s.hit ? scale : 0.0;
  return s;
}

struct BlockResult {
  std::vector<PairMoments> eta;
  double cpu = 0.0;
  std::uint64_t censored = 0;
  std::uint64_t hits = 0;
};

void check_censoring(std::uint64_t censored, std::uint64_t total, double max_fraction) {
  if (total > 0 && static_cast<double>(censored) > max_fraction * static_cast<double>(total)) {
    throw CensoringError(std::to_string(censored) + " of " + std::to_string(total) +
                         " trajectories reached max_steps");
  }
}

CurrentEstimate run_direct(const ForwardModel& model, const WalkParams& params,
                           const DoubleRandomizationPlan& plan, const RunOptions& options,
                           std::uint64_t offset) {
  const auto& cem = require_cem(model.bc());
  if (plan.M1 == 0 || plan.M2 == 0) throw std::invalid_argument("M1 and M2 must be at least 1");
  const std::size_t N = cem.layout.count();
  const std::uint64_t per = plan.per_electrode();
  const std::uint64_t total = per * N;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t nblocks = (total + options.block_size - 1) / options.block_size;
  std::vector<BlockResult> blocks(nblocks);
  for_each_block(total, options.block_size, options.workers,
                 [&](std::uint64_t begin, std::uint64_t end, std::size_t slot) {
                   const double c0 = thread_cpu_seconds();
                   BlockResult br;
                   br.eta.resize(N);
                   for (std::uint64_t i = begin; i < end; ++i) {
                     const std::size_t l = static_cast<std::size_t>(i / per);
                     const std::uint64_t j = i % per;
                     const auto s = direct_sample_at(model, params, l, j / plan.M1, j % plan.M1,
                                                     plan, options.seed, offset);
                     if (s.censored) {
                       ++br.censored;
                       continue;
                     }
                     br.hits += s.hit ? 1 : 0;
                     br.eta[l].add(s.eta0, s.eta1);
                   }
                   br.cpu = thread_cpu_seconds() - c0;
                   blocks[slot] = std::move(br);
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
  check_censoring(censored, total, options.max_censored_fraction);
  auto est = assemble_currents(cem, std::move(eta), model.geometry().inclusion().has_value());
  est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  est.cpu_time = cpu;
  est.censored = censored;
  est.hits = hits;
  return est;
}

}  // namespace

StreamKey start_key(std::uint64_t seed, std::size_t electrode, std::uint64_t m2,
                    const DoubleRandomizationPlan& plan) {
  return start_key_at(seed, 0, electrode, m2, plan);
}

StreamKey trajectory_key(std::uint64_t seed, std::size_t electrode, std::uint64_t m2,
                         std::uint64_t m1, const DoubleRandomizationPlan& plan) {
  return trajectory_key_at(seed, 0, electrode, m2, m1, plan);
}

EtaSample direct_sample(const ForwardModel& model, const WalkParams& params, std::size_t electrode,
                        std::uint64_t m2, std::uint64_t m1, const DoubleRandomizationPlan& plan,
                        std::uint64_t seed) {
  return direct_sample_at(model, params, electrode, m2, m1, plan, seed, 0);
}

XiEstimate estimate_xi(std::size_t electrode, XiKind kind, const ForwardModel& model,
                       const WalkParams& params, const DoubleRandomizationPlan& plan,
                       const RunOptions& options) {
  const auto& cem = require_cem(model.bc());
  if (electrode >= cem.layout.count()) throw std::out_of_range("electrode index out of range");
  const std::uint64_t per = plan.per_electrode();
  const std::uint64_t nblocks = (per + options.block_size - 1) / options.block_size;
  std::vector<RunningMoments> blocks(nblocks);
  std::vector<std::uint64_t> censored(nblocks, 0);
  for_each_block(per, options.block_size, options.workers,
                 [&](std::uint64_t begin, std::uint64_t end, std::size_t slot) {
                   RunningMoments m;
                   for (std::uint64_t j = begin; j < end; ++j) {
                     const auto s = direct_sample(model, params, electrode, j / plan.M1,
                                                  j % plan.M1, plan, options.seed);
                     if (s.censored) {
                       ++censored[slot];
                       continue;
                     }
                     m.add(kind == XiKind::U0 ? s.eta0 : s.eta1);
                   }
                   blocks[slot] = m;
                 });
  RunningMoments all;
  std::uint64_t cens = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    all = merge(all, blocks[b]);
    cens += censored[b];
  }
  check_censoring(cens, per, options.max_censored_fraction);
  return {electrode, kind, all.mean, all.variance(), all.n};
}

double estimate_c(const std::vector<XiEstimate>& xi0, const std::vector<XiEstimate>& xi1,
                  const CemBoundary& cem) {
  const std::size_t N = cem.layout.count();
  if (xi0.size() != N || xi1.size() != N) throw std::invalid_argument("one estimate per electrode required");
  const double E = cem.layout.electrode_length();
  double num = 0.0, den = 0.0, den_var = 0.0;
  for (std::size_t l = 0; l < N; ++l) {
    num += E * cem.pattern[l] / cem.z - xi0[l].mean;
    den += xi1[l].mean;
    if (xi1[l].n > 0) den_var += xi1[l].variance / static_cast<double>(xi1[l].n);
  }
  if (!(std::abs(den) > 3.0 * std::sqrt(den_var)) || den == 0.0) {
    throw std::runtime_error("inclusion unreachable or absent: cannot estimate c");
  }
  return num / den;
}

CurrentEstimate assemble_currents(const CemBoundary& cem, std::vector<PairMoments> eta,
                                  bool has_inclusion, std::optional<double> c_override) {
  const std::size_t N = cem.layout.count();
  if (eta.size() != N) throw std::invalid_argument("one moment accumulator per electrode required");
  const double E = cem.layout.electrode_length();
  CurrentEstimate est;
  if (has_inclusion) {
    if (c_override) {
      est.c_hat = *c_override;
    } else {
      std::vector<XiEstimate> x0(N), x1(N);
      for (std::size_t l = 0; l < N; ++l) {
        x0[l] = {l, XiKind::U0, eta[l].mean_x, eta[l].var_x(), eta[l].n};
        x1[l] = {l, XiKind::U1, eta[l].mean_y, eta[l].var_y(), eta[l].n};
      }
      est.c_hat = estimate_c(x0, x1, cem);
    }
  }
  est.J.resize(N);
  est.per_electrode.resize(N);
  for (std::size_t l = 0; l < N; ++l) {
    const auto& m = eta[l];
    est.J[l] = cem.pattern[l] / cem.z - (m.mean_x + est.c_hat * m.mean_y) / E;
    est.per_electrode[l] = {est.J[l], m.variance_of(1.0, est.c_hat) / (E * E), m.n};
    est.charge_residual += est.J[l];
  }
  est.eta = std::move(eta);
  return est;
}

CurrentEstimate estimate_currents(const ForwardModel& model, const WalkParams& params,
                                  const DoubleRandomizationPlan& plan, const RunOptions& options) {
  const auto& cem = require_cem(model.bc());
  if (!options.independent_c || !model.geometry().inclusion()) {
    return run_direct(model, params, plan, options, 0);
  }
  const std::uint64_t offset = plan.per_electrode() * cem.layout.count();
  const auto aux = run_direct(model, params, plan, options, offset);
  auto main = run_direct(model, params, plan, options, 0);
  auto est = assemble_currents(cem, main.eta, true, aux.c_hat);
  est.wall_time = main.wall_time + aux.wall_time;
  est.cpu_time = main.cpu_time + aux.cpu_time;
  est.censored = main.censored + aux.censored;
  est.hits = main.hits;
  return est;
}

PotentialEstimate estimate_potential(Point x, const ForwardModel& model, const WalkParams& params,
                                     ScoreKind kind, std::uint64_t n, const RunOptions& options,
                                     std::optional<MediumRealization> medium) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t nblocks = (n + options.block_size - 1) / options.block_size;
  struct Block {
    RunningMoments m;
    double hits = 0.0;
    double cpu = 0.0;
    std::uint64_t censored = 0;
  };
  std::vector<Block> blocks(nblocks);
  const bool random = !medium && model.conductivity().random();
  const MediumRealization fixed = medium.value_or(nominal_medium(model.conductivity()));
  const SceneGeometry fixed_geom = model.realized_geometry(fixed);
  for_each_block(n, options.block_size, options.workers,
                 [&](std::uint64_t begin, std::uint64_t end, std::size_t slot) {
                   const double c0 = thread_cpu_seconds();
                   Block b;
                   for (std::uint64_t i = begin; i < end; ++i) {
                     Stream rng(StreamKey{options.seed, i, kNestTrajectory, 0});
                     TrajectoryOutcome out;
                     if (random) {
                       const auto m = sample_medium(model.conductivity(), rng);
                       out = simulate(x, model.realized_geometry(m), model.bc(), m, params, kind, rng);
                     } else {
                       out = simulate(x, fixed_geom, model.bc(), fixed, params, kind, rng);
                     }
                     if (out.terminal == Terminal::Censored) {
                       ++b.censored;
                       continue;
                     }
                     double v = out.score_sum;
                     if (kind == ScoreKind::U1 && out.terminal == Terminal::HitInclusion) v += 1.0;
                     b.m.add(v);
                     b.hits += static_cast<double>(out.boundary_hits);
                   }
                   b.cpu = thread_cpu_seconds() - c0;
                   blocks[slot] = b;
                 });
  PotentialEstimate est;
  double hits = 0.0;
  for (const auto& b : blocks) {
    est.moments = merge(est.moments, b.m);
    hits += b.hits;
    est.cpu_time += b.cpu;
    est.censored += b.censored;
  }
  check_censoring(est.censored, n, options.max_censored_fraction);
  est.mean_boundary_hits = est.moments.n > 0 ? hits / static_cast<double>(est.moments.n) : 0.0;
  est.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return est;
}

}  // namespace prwos
