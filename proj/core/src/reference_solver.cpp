#include "prwos/reference_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace prwos {

std::vector<RadialLayer> radial_layers(const SceneGeometry& geometry,
                                       const MediumRealization& medium) {
  std::vector<RadialLayer> layers;
  const double r0 = geometry.inclusion() ? geometry.inclusion()->radius : 0.0;
  if (geometry.interface()) {
    const double s = geometry.interface()->radius;
    layers.push_back({r0, s, medium.kappa_inner});
    layers.push_back({s, geometry.outer().radius, medium.kappa_outer});
  } else {
    layers.push_back({r0, geometry.outer().radius, medium.kappa_outer});
  }
  return layers;
}

namespace {

// Per-layer profile of mode k >= 1 in the form
//   R(r) = p (r/r_out)^k + q (r_in/r)^k,
// normalized so that R = 1 at the outermost radius. Propagates the
// logarithmic derivative y = r R'/R outwards, which keeps every quantity
// bounded for large k.
struct ModeProfile {
  std::vector<double> p, q;
  double lambda = 0.0;
};

ModeProfile mode_profile(int k, const std::vector<RadialLayer>& layers, bool core) {
  const std::size_t L = layers.size();
  ModeProfile out;
  out.p.resize(L);
  out.q.resize(L);
  std::vector<double> ratio(L);  // R(r_in) / R(r_out) within each layer
  const double kk = static_cast<double>(k);
  double t_in = core ? -1.0 : 0.0;
  double y = 0.0;
  for (std::size_t j = 0; j < L; ++j) {
    const auto& lay = layers[j];
    const double a = lay.r_in > 0.0 ? std::pow(lay.r_in / lay.r_out, kk) : 0.0;
    const double den = 1.0 + t_in * a * a;
    out.p[j] = 1.0 / den;
    out.q[j] = t_in * a / den;
    ratio[j] = a * (1.0 + t_in) / den;
    const double t_out = t_in * a * a;
    y = kk * (1.0 - t_out) / (1.0 + t_out);
    if (j + 1 < L) {
      const double y_next = y * lay.kappa / layers[j + 1].kappa;
      t_in = (kk - y_next) / (kk + y_next);
    }
  }
  out.lambda = y / layers.back().r_out;
  double scale = 1.0;
  for (std::size_t j = L; j-- > 0;) {
    out.p[j] *= scale;
    out.q[j] *= scale;
    scale *= ratio[j];
  }
  return out;
}

}  // namespace

std::vector<double> dtn_spectrum(int K, const std::vector<RadialLayer>& layers, CoreKind core) {
  std::vector<double> lambda(static_cast<std::size_t>(K) + 1, 0.0);
  if (core == CoreKind::Dirichlet) {
    // w = ln(r / r_core) in the first layer, flux kappa r w' conserved.
    double w = 0.0, b = 1.0;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      if (j > 0) b *= layers[j - 1].kappa / layers[j].kappa;
      w += b * std::log(layers[j].r_out / layers[j].r_in);
    }
    lambda[0] = b / (w * layers.back().r_out);
  }
  for (int k = 1; k <= K; ++k) {
    lambda[static_cast<std::size_t>(k)] =
        mode_profile(k, layers, core != CoreKind::None).lambda;
  }
  return lambda;
}

double mode_dtn(int k, const MediumRealization& medium, const SceneGeometry& geometry,
                CoreKind core) {
  if (k < 0) throw std::invalid_argument("mode index must be non-negative");
  if (core != CoreKind::None && !geometry.inclusion()) {
    throw std::invalid_argument("core condition requires an inclusion");
  }
  const auto layers = radial_layers(geometry, medium);
  if (k == 0) return dtn_spectrum(0, layers, core)[0];
  return mode_profile(k, layers, core != CoreKind::None).lambda;
}

FourierSolution::FourierSolution(int K, std::vector<RadialLayer> layers, CoreCondition core,
                                 double z, std::vector<double> a, std::vector<double> b)
    : K_(K), z_(z), core_(core), layers_(std::move(layers)), a_(std::move(a)), b_(std::move(b)) {
  if (K < 0) throw std::invalid_argument("mode truncation must be non-negative");
  const auto n = static_cast<std::size_t>(K) + 1;
  if (a_.size() != n || b_.size() != n) throw std::invalid_argument("coefficient size mismatch");
  if (layers_.empty()) throw std::invalid_argument("at least one radial layer required");
  if (core_.kind != CoreKind::None && !(layers_.front().r_in > 0.0)) {
    throw std::invalid_argument("core condition requires a positive core radius");
  }
  core_radius_ = core_.kind == CoreKind::None ? 0.0 : layers_.front().r_in;
  kappa_outer_ = layers_.back().kappa;
  const std::size_t L = layers_.size();
  lambda_.assign(n, 0.0);
  p_.assign(n * L, 0.0);
  q_.assign(n * L, 0.0);
  for (int k = 1; k <= K; ++k) {
    const auto prof = mode_profile(k, layers_, core_.kind != CoreKind::None);
    lambda_[static_cast<std::size_t>(k)] = prof.lambda;
    for (std::size_t j = 0; j < L; ++j) {
      p_[static_cast<std::size_t>(k) * L + j] = prof.p[j];
      q_[static_cast<std::size_t>(k) * L + j] = prof.q[j];
    }
  }
  w0_a_.assign(L, 1.0);
  w0_b_.assign(L, 0.0);
  if (core_.kind == CoreKind::Dirichlet) {
    double w = 0.0, bb = 1.0;
    for (std::size_t j = 0; j < L; ++j) {
      if (j > 0) bb *= layers_[j - 1].kappa / layers_[j].kappa;
      w0_a_[j] = w;
      w0_b_[j] = bb;
      w += bb * std::log(layers_[j].r_out / layers_[j].r_in);
    }
    for (std::size_t j = 0; j < L; ++j) {
      w0_a_[j] /= w;
      w0_b_[j] /= w;
    }
    lambda_[0] = w0_b_.back() / layers_.back().r_out;
  }
}

double FourierSolution::inclusion_constant() const {
  switch (core_.kind) {
    case CoreKind::None: return 0.0;
    case CoreKind::Floating: return a_[0];
    case CoreKind::Dirichlet: return core_.value;
  }
  return 0.0;
}

std::size_t FourierSolution::layer_of(double r) const {
  for (std::size_t j = 0; j + 1 < layers_.size(); ++j) {
    if (r <= layers_[j].r_out) return j;
  }
  return layers_.size() - 1;
}

double FourierSolution::k0_profile(std::size_t layer, double r) const {
  if (core_.kind != CoreKind::Dirichlet) return 1.0;
  return w0_a_[layer] + w0_b_[layer] * std::log(r / layers_[layer].r_in);
}

double FourierSolution::evaluate(Point p) const {
  const double r = p.norm();
  if (core_.kind != CoreKind::None && r <= core_radius_) return inclusion_constant();
  const std::size_t j = layer_of(r);
  const auto& lay = layers_[j];
  const std::size_t L = layers_.size();
  const double c0 = core_.kind == CoreKind::Dirichlet ? core_.value : 0.0;
  double u = c0 + (a_[0] - c0) * k0_profile(j, r);
  if (K_ == 0) return u;
  const double theta = std::atan2(p.y, p.x);
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  const double grow = r / lay.r_out;
  const double decay = lay.r_in > 0.0 ? lay.r_in / r : 0.0;
  double ck = 1.0, sk = 0.0, gk = 1.0, dk = 1.0;
  for (int k = 1; k <= K_; ++k) {
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
    gk *= grow;
    dk *= decay;
    const auto idx = static_cast<std::size_t>(k) * L + j;
    const double radial = p_[idx] * gk + q_[idx] * dk;
    u += radial * (a_[static_cast<std::size_t>(k)] * ck + b_[static_cast<std::size_t>(k)] * sk);
  }
  return u;
}

double FourierSolution::trace(double theta) const {
  double u = a_[0];
  for (int k = 1; k <= K_; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    u += a_[kk] * std::cos(k * theta) + b_[kk] * std::sin(k * theta);
  }
  return u;
}

double FourierSolution::boundary_flux(double theta) const {
  const double c0 = core_.kind == CoreKind::Dirichlet ? core_.value : 0.0;
  double d = lambda_[0] * (a_[0] - c0);
  for (int k = 1; k <= K_; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    d += lambda_[kk] * (a_[kk] * std::cos(k * theta) + b_[kk] * std::sin(k * theta));
  }
  return kappa_outer_ * d;
}

double FourierSolution::trace_integral(double theta0, double theta1) const {
  double s = a_[0] * (theta1 - theta0);
  for (int k = 1; k <= K_; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double dk = static_cast<double>(k);
    s += a_[kk] * (std::sin(k * theta1) - std::sin(k * theta0)) / dk -
         b_[kk] * (std::cos(k * theta1) - std::cos(k * theta0)) / dk;
  }
  return s;
}

void FourierSolution::write_coefficients_csv(std::ostream& os) const {
  const std::size_t L = layers_.size();
  const auto precision = os.precision(17);
  os << "k,layer,r_in,r_out,kappa,trace_cos,trace_sin,dtn,p,q\n";
  for (int k = 0; k <= K_; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < L; ++j) {
      const double p = k == 0 ? w0_a_[j] : p_[kk * L + j];
      const double q = k == 0 ? w0_b_[j] : q_[kk * L + j];
      os << k << ',' << j << ',' << layers_[j].r_in << ',' << layers_[j].r_out << ','
         << layers_[j].kappa << ',' << a_[kk] << ',' << b_[kk] << ',' << lambda_[kk] << ','
         << p << ',' << q << '\n';
    }
  }
  os.precision(precision);
}

namespace {

void check_concentric_origin(const SceneGeometry& g) {
  if (g.center().x != 0.0 || g.center().y != 0.0 || g.outer().radius != 1.0) {
    throw std::invalid_argument("reference solver expects the unit disk centered at the origin");
  }
}

}  // namespace

FourierSolution solve_idealized(const ForwardModel& model, int K,
                                std::optional<MediumRealization> medium) {
  const auto* robin = std::get_if<IdealizedRobin>(&model.bc());
  if (!robin) throw std::invalid_argument("solve_idealized requires an idealized Robin condition");
  check_concentric_origin(model.geometry());
  const auto m = medium.value_or(nominal_medium(model.conductivity()));
  const auto geom = model.realized_geometry(m);
  CoreCondition core;
  if (geom.inclusion()) core = {CoreKind::Dirichlet, robin->inclusion_potential};
  int kmax = K;
  for (const auto& t : robin->phi) {
    if (t.k < 0) throw std::invalid_argument("Fourier mode index must be non-negative");
    kmax = std::max(kmax, t.k);
  }
  auto layers = radial_layers(geom, m);
  const auto lambda = dtn_spectrum(kmax, layers, core.kind);
  const double zk = robin->z * m.kappa_outer;
  std::vector<double> phi_a(static_cast<std::size_t>(kmax) + 1, 0.0), phi_b(phi_a);
  for (const auto& t : robin->phi) {
    phi_a[static_cast<std::size_t>(t.k)] += t.a;
    if (t.k > 0) phi_b[static_cast<std::size_t>(t.k)] += t.b;
  }
  std::vector<double> a(phi_a.size()), b(phi_a.size(), 0.0);
  a[0] = (phi_a[0] + zk * lambda[0] * core.value) / (1.0 + zk * lambda[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    a[k] = phi_a[k] / (1.0 + zk * lambda[k]);
    b[k] = phi_b[k] / (1.0 + zk * lambda[k]);
  }
  return FourierSolution(kmax, std::move(layers), core, robin->z, std::move(a), std::move(b));
}

CemSolution solve_cem(const ForwardModel& model, int K, const CemSolveOptions& options) {
  const auto& cem = require_cem(model.bc());
  check_concentric_origin(model.geometry());
  if (K < 1) throw std::invalid_argument("CEM solve needs K >= 1");
  const auto m = options.medium.value_or(nominal_medium(model.conductivity()));
  const auto geom = model.realized_geometry(m);
  CoreCondition core;
  if (geom.inclusion()) {
    core = options.core_dirichlet ? CoreCondition{CoreKind::Dirichlet, *options.core_dirichlet}
                                  : CoreCondition{CoreKind::Floating, 0.0};
  } else if (options.core_dirichlet) {
    throw std::invalid_argument("Dirichlet core requested without an inclusion");
  }
  auto layers = radial_layers(geom, m);
  const auto lambda = dtn_spectrum(K, layers, core.kind);
  const double zk = cem.z * m.kappa_outer;
  const int n_max = 2 * K;

  // Arc integrals of cos(n theta), sin(n theta) weighted by f and by g.
  std::vector<double> fc(static_cast<std::size_t>(n_max) + 1, 0.0), fs(fc), gc(fc), gs(fc);
  for (std::size_t l = 0; l < cem.layout.count(); ++l) {
    const auto& arc = cem.layout.arc(l);
    const double U = cem.pattern[l] * options.data_scale;
    for (int nn = 0; nn <= n_max; ++nn) {
      double ic, is;
      if (nn == 0) {
        ic = 2.0 * arc.half_width;
        is = 0.0;
      } else {
        const double sw = 2.0 * std::sin(nn * arc.half_width) / nn;
        ic = std::cos(nn * arc.center_angle) * sw;
        is = std::sin(nn * arc.center_angle) * sw;
      }
      const auto i = static_cast<std::size_t>(nn);
      fc[i] += ic;
      fs[i] += is;
      gc[i] += U * ic;
      gs[i] += U * is;
    }
  }
  auto Fc = [&](int nn) { return fc[static_cast<std::size_t>(std::abs(nn))]; };
  auto Fs = [&](int nn) {
    return nn >= 0 ? fs[static_cast<std::size_t>(nn)] : -fs[static_cast<std::size_t>(-nn)];
  };

  // Basis ordering: 0 -> 1, 2k-1 -> cos k, 2k -> sin k.
  const int n = 2 * K + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  auto kind_of = [](int i) { return i == 0 ? 0 : (i % 2 == 1 ? 1 : 2); };
  auto freq_of = [](int i) { return (i + 1) / 2; };
  for (int i = 0; i < n; ++i) {
    const int ki = freq_of(i), ti = kind_of(i);
    for (int j = 0; j <= i; ++j) {
      const int kj = freq_of(j), tj = kind_of(j);
      double v;
      if (ti == 0 && tj == 0) {
        v = Fc(0);
      } else if (tj == 0) {
        v = ti == 1 ? Fc(ki) : Fs(ki);
      } else if (ti == 1 && tj == 1) {
        v = 0.5 * (Fc(ki - kj) + Fc(ki + kj));
      } else if (ti == 2 && tj == 2) {
        v = 0.5 * (Fc(ki - kj) - Fc(ki + kj));
      } else {
        // cos(kc) sin(ks)
        const int kc = ti == 1 ? ki : kj;
        const int ks = ti == 2 ? ki : kj;
        v = 0.5 * (Fs(ks + kc) + Fs(ks - kc));
      }
      A(i, j) = v;
      A(j, i) = v;
    }
    const double gram = i == 0 ? kTwoPi : kPi;
    A(i, i) += zk * lambda[static_cast<std::size_t>(ki)] * gram;
    rhs(i) = ti == 0 ? gc[0] : (ti == 1 ? gc[static_cast<std::size_t>(ki)] : gs[static_cast<std::size_t>(ki)]);
  }
  if (core.kind == CoreKind::Dirichlet) rhs(0) += zk * lambda[0] * core.value * kTwoPi;

  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("CEM Galerkin matrix is not positive definite; reduce K");
  }
  const Eigen::VectorXd x = llt.solve(rhs);
  const double rel = (A * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (!(rel < 1e-8)) {
    throw std::runtime_error("CEM Galerkin solve is ill-conditioned; reduce K");
  }
  std::vector<double> a(static_cast<std::size_t>(K) + 1, 0.0), b(a);
  a[0] = x(0);
  for (int k = 1; k <= K; ++k) {
    a[static_cast<std::size_t>(k)] = x(2 * k - 1);
    b[static_cast<std::size_t>(k)] = x(2 * k);
  }
  FourierSolution sol(K, std::move(layers), core, cem.z, std::move(a), std::move(b));

  ReferenceCurrents cur;
  const double E = cem.layout.electrode_length();
  cur.J.resize(cem.layout.count());
  cur.electrode_mean.resize(cem.layout.count());
  for (std::size_t l = 0; l < cem.layout.count(); ++l) {
    const auto& arc = cem.layout.arc(l);
    const double mean =
        sol.trace_integral(arc.center_angle - arc.half_width, arc.center_angle + arc.half_width) / E;
    cur.electrode_mean[l] = mean;
    cur.J[l] = (cem.pattern[l] * options.data_scale - mean) / cem.z;
  }
  cur.c = sol.inclusion_constant();

  // Boundary-condition residual away from the electrode edges.
  const int Q = options.residual_points > 0 ? options.residual_points : 16 * K;
  const double exclude = 5.0 / K;
  double res = 0.0;
  for (int i = 0; i < Q; ++i) {
    const double theta = kTwoPi * (i + 0.5) / Q;
    bool near_edge = false;
    for (const auto& arc : cem.layout.arcs()) {
      const double d = std::abs(wrap_angle(theta - arc.center_angle));
      if (std::abs(d - arc.half_width) < exclude) near_edge = true;
    }
    if (near_edge) continue;
    const auto fg = boundary_fg(theta, model.bc());
    const double r = cem.z * sol.boundary_flux(theta) + fg.f * sol.trace(theta) -
                     fg.g * options.data_scale;
    res = std::max(res, std::abs(r));
  }
  cur.bc_residual = res;
  return {std::move(sol), std::move(cur)};
}

namespace {

// Tensor Gauss-Legendre over the random medium parameters.
void for_each_medium_node(const ConductivityField& field,
                          const std::function<void(const MediumRealization&, double)>& fn) {
  using Rule = boost::math::quadrature::gauss<double, 5>;
  struct Axis {
    std::vector<double> x, w;
  };
  auto axis = [](const Parameter& p) {
    Axis ax;
    if (!p.random()) {
      ax.x = {p.lo};
      ax.w = {1.0};
      return ax;
    }
    const auto& abs = Rule::abscissa();
    const auto& wts = Rule::weights();
    const double mid = p.mean(), half = 0.5 * (p.hi - p.lo);
    // Rule stores the non-negative half of a symmetric rule, zero first.
    for (std::size_t i = 0; i < abs.size(); ++i) {
      const double wi = 0.5 * wts[i];
      ax.x.push_back(mid - half * abs[i]);
      ax.w.push_back(wi);
      if (abs[i] != 0.0) {
        ax.x.push_back(mid + half * abs[i]);
        ax.w.push_back(wi);
      }
    }
    return ax;
  };
  const Axis ao = axis(field.outer), ai = axis(field.inner);
  const Axis ar = field.interface_radius ? axis(*field.interface_radius) : Axis{{0.0}, {1.0}};
  for (std::size_t i = 0; i < ao.x.size(); ++i)
    for (std::size_t j = 0; j < ai.x.size(); ++j)
      for (std::size_t k = 0; k < ar.x.size(); ++k) {
        fn(MediumRealization{ao.x[i], ai.x[j], ar.x[k]}, ao.w[i] * ai.w[j] * ar.w[k]);
      }
}

}  // namespace

ReferenceCurrents expected_reference_currents(const ForwardModel& model, int K) {
  const auto& cem = require_cem(model.bc());
  ReferenceCurrents acc;
  acc.J.assign(cem.layout.count(), 0.0);
  acc.electrode_mean.assign(cem.layout.count(), 0.0);
  for_each_medium_node(model.conductivity(), [&](const MediumRealization& m, double w) {
    CemSolveOptions opt;
    opt.medium = m;
    const auto s = solve_cem(model, K, opt);
    for (std::size_t l = 0; l < acc.J.size(); ++l) {
      acc.J[l] += w * s.currents.J[l];
      acc.electrode_mean[l] += w * s.currents.electrode_mean[l];
    }
    acc.c += w * s.currents.c;
    acc.bc_residual = std::max(acc.bc_residual, s.currents.bc_residual);
  });
  return acc;
}

std::vector<double> no_inclusion_electrode_means(const ForwardModel& model, int K) {
  return expected_reference_currents(model.without_inclusion(), K).electrode_mean;
}

}  // namespace prwos
