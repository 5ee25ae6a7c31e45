#include "prwos/tools/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "prwos/reference_solver.hpp"
#include "prwos/stats.hpp"
#include "prwos/variance_reduction.hpp"

#ifndef PRWOS_VERSION_STRING
#define PRWOS_VERSION_STRING "unknown"
#endif

namespace prwos::tools {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

OutputTable make_table(const ExperimentConfig& c, std::vector<std::string> columns) {
  OutputTable t(std::move(columns));
  t.set_meta("experiment", std::string(to_string(c.experiment)));
  t.set_meta("config_hash", config_hash(c));
  t.set_meta("seed", std::to_string(c.seed));
  t.set_meta("version", version_string());
  return t;
}

void finish(OutputTable& t, const RunSettings& s, Clock::time_point t0) {
  if (s.timing) t.set_meta("wall_time", format_double(seconds_since(t0)));
}

void progress(const RunSettings& s, const std::string& msg) {
  if (s.log) *s.log << msg << std::endl;
}

std::vector<std::optional<double>> radii_of(const ExperimentConfig& c) {
  std::vector<std::optional<double>> out;
  for (double r : c.inclusion_radii) out.emplace_back(r);
  if (out.empty()) out.emplace_back(std::nullopt);
  return out;
}

double scheme_code(InterfaceScheme s) { return static_cast<double>(static_cast<int>(s)); }

ReferenceCurrents reference_currents(const ExperimentConfig& c, const ForwardModel& m) {
  return c.random_medium() ? expected_reference_currents(m, c.modes) : solve_cem(m, c.modes).currents;
}

void append_eoc(OutputTable& t, std::size_t first_row, const std::vector<std::pair<double, double>>& pts,
                const std::string& key) {
  if (pts.size() < 2) return;
  const std::size_t eoc_col = t.column_index("eoc");
  try {
    const auto fit = fit_eoc(pts);
    t.set_meta(key, format_double(fit.slope));
    for (std::size_t i = first_row; i < t.rows().size(); ++i) t.set(i, eoc_col, fit.slope);
  } catch (const std::invalid_argument& e) {
    t.set_meta(key, std::string("unavailable (") + e.what() + ")");
  }
}

std::string z_label(double z) { return "z=" + format_double(z); }

}  // namespace

std::string version_string() { return "prwos " PRWOS_VERSION_STRING; }

ForwardModel build_model(const ExperimentConfig& c, std::optional<double> inclusion_radius, double z,
                         double h) {
  const Point o{0.0, 0.0};
  std::optional<Circle> inclusion;
  if (inclusion_radius) inclusion = Circle(o, *inclusion_radius);
  std::optional<Circle> interface;
  if (c.interface_radius) interface = Circle(o, c.interface_radius->mean());
  SceneGeometry g(Circle(o, c.outer_radius), inclusion, interface, c.eps_for(h));
  ConductivityField cf;
  cf.outer = c.kappa_outer;
  cf.inner = c.kappa_inner;
  cf.interface_radius = c.interface_radius;
  BoundaryCondition bc;
  if (c.cem) {
    bc = CemBoundary{c.layout(), c.pattern(), z};
  } else {
    bc = IdealizedRobin{c.phi, z, c.inclusion_potential};
  }
  return ForwardModel(std::move(g), cf, std::move(bc));
}

WalkParams walk_params(const ExperimentConfig& c, double h, InterfaceScheme scheme) {
  WalkParams p;
  p.h = h;
  p.sampler = c.sampler;
  p.interface_scheme = scheme;
  p.max_steps = c.max_steps;
  return p;
}

RunOptions run_options(const ExperimentConfig& c) {
  RunOptions o;
  o.seed = c.seed;
  o.workers = c.workers;
  o.block_size = c.block_size;
  o.independent_c = c.independent_c;
  return o;
}

OutputTable run_potential(const ExperimentConfig& c, const RunSettings& s) {
  const auto t0 = Clock::now();
  std::vector<std::string> cols{"z", "scheme", "h", "eps", "estimate", "std_error", "reference",
                                "bias_vs_reference", "n", "mean_boundary_hits", "eoc"};
  if (s.timing) cols.push_back("cpu_time");
  auto t = make_table(c, cols);
  t.set_meta("point", format_double(c.point.x) + ", " + format_double(c.point.y));
  t.set_meta("scheme_codes", "0=equal_flux 1=equal_step 2=sqrt_scaled");
  const auto radius = radii_of(c).front();
  const RunOptions opt = run_options(c);
  for (double z : c.z) {
    for (auto scheme : c.interface_schemes) {
      const std::size_t first = t.rows().size();
      std::vector<std::pair<double, double>> pts;
      double reference = kNaN;
      for (double h : c.h) {
        const ForwardModel m = build_model(c, radius, z, h);
        if (std::isnan(reference)) reference = solve_idealized(m, c.modes).evaluate(c.point);
        const auto e = estimate_potential(c.point, m, walk_params(c, h, scheme),
                                          ScoreKind::IdealizedPotential, c.paths, opt);
        const double bias = e.moments.mean - reference;
        pts.emplace_back(h, bias);
        std::vector<double> row{z, scheme_code(scheme), h, m.geometry().eps(), e.moments.mean,
                                e.moments.std_error(), reference, bias,
                                static_cast<double>(e.moments.n), e.mean_boundary_hits, kNaN};
        if (s.timing) row.push_back(e.cpu_time);
        t.add_row(std::move(row));
        progress(s, "potential z=" + format_double(z) + " h=" + format_double(h) +
                        " u=" + format_double(e.moments.mean));
      }
      std::string key = "eoc[" + z_label(z);
      if (c.interface_radius) key += " scheme=" + format_double(scheme_code(scheme));
      append_eoc(t, first, pts, key + "]");
    }
  }
  finish(t, s, t0);
  return t;
}

OutputTable run_currents(const ExperimentConfig& c, const RunSettings& s) {
  const auto t0 = Clock::now();
  const std::size_t l = c.electrode - 1;
  const bool vr = c.provider != ProviderKind::None && !c.inclusion_radii.empty();
  std::vector<std::string> cols{"z", "h", "r", "J_ref", "J_direct", "se_direct", "sigma_direct",
                                "c_ref", "c_direct", "charge_residual"};
  if (vr) {
    for (const char* n : {"J_vr", "se_vr", "sigma_vr", "c_vr"}) cols.emplace_back(n);
  }
  if (s.timing) {
    cols.emplace_back("cpu_direct");
    if (vr) cols.emplace_back("cpu_vr");
  }
  auto t = make_table(c, cols);
  t.set_meta("electrode", std::to_string(c.electrode));
  t.set_meta("electrode_voltage", format_double(c.pattern()[l]));
  const DoubleRandomizationPlan plan{c.M1, c.M2};
  const RunOptions opt = run_options(c);
  for (double z : c.z) {
    for (double h : c.h) {
      for (const auto& radius : radii_of(c)) {
        const ForwardModel m = build_model(c, radius, z, h);
        const WalkParams p = walk_params(c, h, c.interface_schemes.front());
        const auto ref = reference_currents(c, m);
        const auto d = estimate_currents(m, p, plan, opt);
        std::vector<double> row{z,
                                h,
                                radius.value_or(0.0),
                                ref.J[l],
                                d.J[l],
                                d.std_error(l),
                                std::sqrt(d.per_electrode[l].variance),
                                ref.c,
                                d.c_hat,
                                d.charge_residual};
        double cpu_vr = 0.0;
        if (vr) {
          VROptions vo;
          vo.start_term = c.pointwise_start ? StartTerm::Pointwise : StartTerm::ElectrodeMean;
          vo.reference_modes = c.modes;
          const ControlVariateProvider prov = c.provider == ProviderKind::Reference
                                                  ? make_reference_provider(m, c.modes)
                                                  : ControlVariateProvider{NestedWalk{c.nested_k, c.nested_sampler}};
          const auto v = estimate_currents_vr(m, p, plan, prov, opt, vo);
          for (double x : {v.J[l], v.std_error(l), std::sqrt(v.per_electrode[l].variance), v.c_hat}) {
            row.push_back(x);
          }
          cpu_vr = v.cpu_time;
        }
        if (s.timing) {
          row.push_back(d.cpu_time);
          if (vr) row.push_back(cpu_vr);
        }
        t.add_row(std::move(row));
        progress(s, "currents z=" + format_double(z) + " h=" + format_double(h) +
                        " r=" + format_double(radius.value_or(0.0)) + " J_ref=" + format_double(ref.J[l]) +
                        " J_direct=" + format_double(d.J[l]));
      }
    }
  }
  finish(t, s, t0);
  return t;
}

OutputTable run_bias_study(const ExperimentConfig& c, const RunSettings& s) {
  const auto t0 = Clock::now();
  const std::size_t l = c.electrode - 1;
  std::vector<std::string> cols{"z", "h", "J", "std_error", "J_ref", "bias", "log_h", "log_abs_bias", "eoc"};
  if (s.timing) cols.emplace_back("cpu_time");
  auto t = make_table(c, cols);
  t.set_meta("electrode", std::to_string(c.electrode));
  const auto radius = radii_of(c).front();
  const DoubleRandomizationPlan plan{c.M1, c.M2};
  const RunOptions opt = run_options(c);
  for (double z : c.z) {
    const std::size_t first = t.rows().size();
    std::vector<std::pair<double, double>> pts;
    double J_ref = kNaN;
    for (double h : c.h) {
      const ForwardModel m = build_model(c, radius, z, h);
      if (std::isnan(J_ref)) J_ref = reference_currents(c, m).J[l];
      const auto d = estimate_currents(m, walk_params(c, h, c.interface_schemes.front()), plan, opt);
      const double bias = d.J[l] - J_ref;
      pts.emplace_back(h, bias);
      std::vector<double> row{z, h, d.J[l], d.std_error(l), J_ref, bias, std::log(h),
                              bias != 0.0 ? std::log(std::abs(bias)) : kNaN, kNaN};
      if (s.timing) row.push_back(d.cpu_time);
      t.add_row(std::move(row));
      progress(s, "bias z=" + format_double(z) + " h=" + format_double(h) + " bias=" + format_double(bias));
    }
    append_eoc(t, first, pts, "eoc[" + z_label(z) + "]");
  }
  finish(t, s, t0);
  return t;
}

namespace {

struct MethodResult {
  double sigma = 0.0;
  double cpu = 0.0;
  double J = 0.0;
  double se = 0.0;
};

MethodResult run_method(const MethodSpec& method, const ExperimentConfig& c, const ForwardModel& m,
                        const WalkParams& p, std::size_t l) {
  const DoubleRandomizationPlan plan{c.M1, c.M2};
  const RunOptions opt = run_options(c);
  CurrentEstimate e;
  if (method.kind == MethodSpec::Direct || !m.geometry().inclusion()) {
    e = estimate_currents(m, p, plan, opt);
  } else {
    VROptions vo;
    vo.start_term = c.pointwise_start ? StartTerm::Pointwise : StartTerm::ElectrodeMean;
    vo.reference_modes = c.modes;
    const ControlVariateProvider prov = method.kind == MethodSpec::Reference
                                            ? make_reference_provider(m, c.modes)
                                            : ControlVariateProvider{NestedWalk{method.k, method.sampler}};
    e = estimate_currents_vr(m, p, plan, prov, opt, vo);
  }
  return {std::sqrt(e.per_electrode[l].variance), e.cpu_time, e.J[l], e.std_error(l)};
}

}  // namespace

OutputTable run_efficiency(const ExperimentConfig& c, const RunSettings& s) {
  const auto t0 = Clock::now();
  const std::size_t l = c.electrode - 1;
  std::vector<std::string> cols{"r"};
  for (const auto& m : c.methods) {
    const auto lab = m.label();
    cols.push_back("J_" + lab);
    cols.push_back("sigma_" + lab);
    if (s.timing) {
      cols.push_back("cpu_" + lab);
      cols.push_back("C_" + lab);
    }
  }
  auto t = make_table(c, cols);
  t.set_meta("electrode", std::to_string(c.electrode));
  t.set_meta("C", "per-path variance of the electrode current times single-worker CPU seconds of the run");
  const double z = c.z.front();
  const double h = c.h.front();
  for (const auto& radius : radii_of(c)) {
    const ForwardModel m = build_model(c, radius, z, h);
    const WalkParams p = walk_params(c, h, c.interface_schemes.front());
    std::vector<double> row{radius.value_or(0.0)};
    for (const auto& method : c.methods) {
      const auto res = run_method(method, c, m, p, l);
      row.push_back(res.J);
      row.push_back(res.sigma);
      if (s.timing) {
        row.push_back(res.cpu);
        row.push_back(efficiency(res.sigma * res.sigma, res.cpu).C);
      }
      progress(s, "efficiency r=" + format_double(radius.value_or(0.0)) + " " + method.label() +
                      " sigma=" + format_double(res.sigma) + " cpu=" + format_double(res.cpu));
    }
    t.add_row(std::move(row));
  }
  finish(t, s, t0);
  return t;
}

OutputTable run_random_medium(const ExperimentConfig& c, const RunSettings& s) {
  const auto t0 = Clock::now();
  const std::size_t l = c.electrode - 1;
  const bool vr = c.provider != ProviderKind::None && !c.inclusion_radii.empty();
  if (c.provider == ProviderKind::Reference && c.random_medium()) {
    throw std::invalid_argument("random media support only nested-walk control variates");
  }
  std::vector<std::string> cols{"r", "E_J_ref", "E_J_direct", "se_direct", "sigma_direct"};
  if (s.timing) cols.emplace_back("C_direct");
  if (vr) {
    for (const char* n : {"E_J_vr", "se_vr", "sigma_vr"}) cols.emplace_back(n);
    if (s.timing) cols.emplace_back("C_vr");
  }
  auto t = make_table(c, cols);
  t.set_meta("electrode", std::to_string(c.electrode));
  t.set_meta("electrode_voltage", format_double(c.pattern()[l]));
  const double z = c.z.front();
  const double h = c.h.front();
  for (const auto& radius : radii_of(c)) {
    const ForwardModel m = build_model(c, radius, z, h);
    const WalkParams p = walk_params(c, h, c.interface_schemes.front());
    const auto ref = reference_currents(c, m);
    const auto d = run_method({MethodSpec::Direct}, c, m, p, l);
    std::vector<double> row{radius.value_or(0.0), ref.J[l], d.J, d.se, d.sigma};
    if (s.timing) row.push_back(efficiency(d.sigma * d.sigma, d.cpu).C);
    if (vr) {
      const MethodSpec spec = c.provider == ProviderKind::Reference
                                  ? MethodSpec{MethodSpec::Reference}
                                  : MethodSpec{MethodSpec::Nested, c.nested_sampler, c.nested_k};
      const auto v = run_method(spec, c, m, p, l);
      for (double x : {v.J, v.se, v.sigma}) row.push_back(x);
      if (s.timing) row.push_back(efficiency(v.sigma * v.sigma, v.cpu).C);
    }
    t.add_row(std::move(row));
    progress(s, "random medium r=" + format_double(radius.value_or(0.0)) + " E_J_ref=" + format_double(ref.J[l]) +
                    " E_J_direct=" + format_double(d.J));
  }
  finish(t, s, t0);
  return t;
}

OutputTable run_field_export(const ExperimentConfig& c, const RunSettings& s) {
  const auto t0 = Clock::now();
  auto t = make_table(c, {"kind", "r", "theta", "x", "y", "u", "flux"});
  t.set_meta("kinds", "0=interior grid 1=outer boundary");
  const auto radius = radii_of(c).front();
  const ForwardModel m = build_model(c, radius, c.z.front(), c.h.front());
  const auto sol = solve_cem(m, c.modes);
  std::string currents;
  for (std::size_t l = 0; l < sol.currents.J.size(); ++l) {
    currents += (l ? ", " : "") + format_double(sol.currents.J[l]);
  }
  t.set_meta("J_ref", currents);
  t.set_meta("c_ref", format_double(sol.currents.c));
  const double R = c.outer_radius;
  const double r0 = radius.value_or(0.0);
  const int nr = c.radial_points;
  const int na = c.angular_points;
  for (int i = 0; i < nr; ++i) {
    const double r = r0 + (R - r0) * static_cast<double>(i) / static_cast<double>(nr - 1);
    for (int j = 0; j < na; ++j) {
      const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(na);
      const Point p{r * std::cos(th), r * std::sin(th)};
      t.add_row({0.0, r, th, p.x, p.y, sol.solution.evaluate(p), kNaN});
    }
  }
  const int nb = 16 * na;
  for (int j = 0; j < nb; ++j) {
    const double th = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(nb);
    t.add_row({1.0, R, th, R * std::cos(th), R * std::sin(th), sol.solution.trace(th),
               sol.solution.boundary_flux(th)});
  }
  finish(t, s, t0);
  return t;
}

OutputTable run_experiment(const ExperimentConfig& c, const RunSettings& s) {
  switch (c.experiment) {
    case Experiment::Potential: return run_potential(c, s);
    case Experiment::Currents: return run_currents(c, s);
    case Experiment::BiasStudy: return run_bias_study(c, s);
    case Experiment::Efficiency: return run_efficiency(c, s);
    case Experiment::RandomMedium: return run_random_medium(c, s);
    case Experiment::FieldExport: return run_field_export(c, s);
  }
  throw std::logic_error("unknown experiment");
}

}  // namespace prwos::tools
