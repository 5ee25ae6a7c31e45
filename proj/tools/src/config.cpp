#include "prwos/tools/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace prwos::tools {

ConfigError::ConfigError(std::string source, int line, std::string message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
      source_(std::move(source)),
      line_(line),
      message_(std::move(message)) {}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::Potential: return "potential";
    case Experiment::Currents: return "currents";
    case Experiment::BiasStudy: return "bias_study";
    case Experiment::Efficiency: return "efficiency";
    case Experiment::RandomMedium: return "random_medium";
    case Experiment::FieldExport: return "field_export";
  }
  return "?";
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Direct: return "direct";
    case Reference: return "reference";
    case Nested: return (sampler == Sampler::Centered ? "rw" : "uw") + std::to_string(k);
  }
  return "?";
}

double ExperimentConfig::eps_for(double step) const {
  switch (eps_rule) {
    case EpsRule::Fixed: return eps;
    case EpsRule::Auto: return default_eps(step);
    case EpsRule::HCubed: return step * step * step;
  }
  return eps;
}

ElectrodeLayout ExperimentConfig::layout() const {
  return ElectrodeLayout::equispaced(electrodes, electrode_width, first_electrode_angle,
                                     outer_radius);
}

VoltagePattern ExperimentConfig::pattern() const {
  return voltages.empty() ? VoltagePattern::alternating(electrodes) : VoltagePattern(voltages);
}

bool ExperimentConfig::random_medium() const {
  return kappa_outer.random() || kappa_inner.random() ||
         (interface_radius && interface_radius->random());
}

std::string format_double(double v) {
  if (v == std::trunc(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::vector<Entry> entries;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class Reader {
 public:
  Reader(std::string_view text, std::string source) : source_(std::move(source)) {
    std::string current;
    sections_[current].line = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(std::string_view(raw).substr(0, hash));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated section header");
        current = trim(std::string_view(s).substr(1, s.size() - 2));
        if (!known_section(current)) fail(line, "unknown section [" + current + "]");
        if (sections_.count(current) && sections_[current].line > 0) {
          fail(line, "duplicate section [" + current + "]");
        }
        sections_[current].line = line;
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      Entry e{trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)),
              line, false};
      if (e.key.empty()) fail(line, "empty key");
      auto& sec = sections_[current];
      for (const auto& prev : sec.entries) {
        if (prev.key == e.key) fail(line, "duplicate key '" + e.key + "'");
      }
      sec.entries.push_back(std::move(e));
    }
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_, line, msg);
  }

  Entry* find(const std::string& section, const std::string& key) {
    auto it = sections_.find(section);
    if (it == sections_.end()) return nullptr;
    for (auto& e : it->second.entries) {
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    }
    return nullptr;
  }

  void check_all_used() const {
    for (const auto& [name, sec] : sections_) {
      for (const auto& e : sec.entries) {
        if (!e.used) {
          fail(e.line, "unknown key '" + e.key + "'" + (name.empty() ? "" : " in [" + name + "]"));
        }
      }
    }
  }

  const std::string& source() const { return source_; }

 private:
  static bool known_section(const std::string& s) {
    static const char* names[] = {"scene", "medium", "bc", "walk", "plan", "vr",
                                  "reference", "potential", "field", "run"};
    return std::any_of(std::begin(names), std::end(names), [&](const char* n) { return s == n; });
  }

  std::string source_;
  std::map<std::string, Section> sections_;
};

double to_double(const Reader& r, const Entry& e, const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* end = b + text.size();
  if (b != end && *b == '+') ++b;
  const auto res = std::from_chars(b, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    r.fail(e.line, e.key + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_uint(const Reader& r, const Entry& e, const std::string& text) {
  std::uint64_t v = 0;
  std::string t = text;
  t.erase(std::remove(t.begin(), t.end(), '_'), t.end());
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    r.fail(e.line, e.key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const Reader& r, const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  r.fail(e.line, e.key + ": expected true or false, got '" + e.value + "'");
}

std::vector<double> to_list(const Reader& r, const Entry& e) {
  std::vector<double> out;
  for (const auto& item : split(e.value, ',')) out.push_back(to_double(r, e, item));
  return out;
}

// "1.5" or "1.3..1.7"
Parameter to_parameter(const Reader& r, const Entry& e) {
  const auto dots = e.value.find("..");
  if (dots == std::string::npos) return Parameter::fixed(to_double(r, e, e.value));
  const double lo = to_double(r, e, trim(std::string_view(e.value).substr(0, dots)));
  const double hi = to_double(r, e, trim(std::string_view(e.value).substr(dots + 2)));
  if (!(hi >= lo)) r.fail(e.line, e.key + ": interval bounds out of order");
  return Parameter::uniform(lo, hi);
}

std::string parameter_text(const Parameter& p) {
  if (!p.random()) return format_double(p.lo);
  return format_double(p.lo) + ".." + format_double(p.hi);
}

template <class T>
T to_enum(const Reader& r, const Entry& e, std::initializer_list<std::pair<const char*, T>> opts) {
  std::string names;
  for (const auto& [name, value] : opts) {
    if (e.value == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  r.fail(e.line, e.key + ": expected one of " + names + ", got '" + e.value + "'");
}

const std::initializer_list<std::pair<const char*, Experiment>> kExperiments = {
    {"potential", Experiment::Potential},       {"currents", Experiment::Currents},
    {"bias_study", Experiment::BiasStudy},      {"efficiency", Experiment::Efficiency},
    {"random_medium", Experiment::RandomMedium}, {"field_export", Experiment::FieldExport}};

const std::initializer_list<std::pair<const char*, Sampler>> kSamplers = {
    {"centered", Sampler::Centered}, {"uncentered", Sampler::Uncentered}};

const char* sampler_name(Sampler s) { return s == Sampler::Centered ? "centered" : "uncentered"; }

const char* scheme_name(InterfaceScheme s) {
  switch (s) {
    case InterfaceScheme::EqualFlux: return "equal_flux";
    case InterfaceScheme::EqualStep: return "equal_step";
    case InterfaceScheme::SqrtScaled: return "sqrt_scaled";
  }
  return "?";
}

InterfaceScheme to_scheme(const Reader& r, const Entry& e, const std::string& text) {
  for (auto s : {InterfaceScheme::EqualFlux, InterfaceScheme::EqualStep, InterfaceScheme::SqrtScaled}) {
    if (text == scheme_name(s)) return s;
  }
  r.fail(e.line, e.key + ": unknown interface scheme '" + text +
                     "' (equal_flux, equal_step, sqrt_scaled)");
}

MethodSpec to_method(const Reader& r, const Entry& e, const std::string& text) {
  if (text == "direct") return {MethodSpec::Direct, Sampler::Uncentered, 0};
  if (text == "reference") return {MethodSpec::Reference, Sampler::Uncentered, 0};
  for (auto [prefix, sampler] : {std::pair{"rw", Sampler::Centered}, std::pair{"uw", Sampler::Uncentered}}) {
    if (text.rfind(prefix, 0) == 0 && text.size() > 2) {
      Entry tmp = e;
      const auto k = to_uint(r, tmp, text.substr(2));
      if (k < 1 || k > 1000) r.fail(e.line, e.key + ": nested path count out of range in '" + text + "'");
      return {MethodSpec::Nested, sampler, static_cast<int>(k)};
    }
  }
  r.fail(e.line, e.key + ": unknown method '" + text + "' (direct, reference, rwK, uwK)");
}

FourierTerm to_term(const Reader& r, const Entry& e, const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) r.fail(e.line, e.key + ": expected k:a:b, got '" + text + "'");
  const auto k = to_uint(r, e, parts[0]);
  if (k > 100000) r.fail(e.line, e.key + ": mode index too large");
  return {static_cast<int>(k), to_double(r, e, parts[1]), to_double(r, e, parts[2])};
}

int line_of(const Entry* e) { return e ? e->line : 0; }

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  Reader r(text, std::string(source));
  ExperimentConfig c;
  auto get = [&](const char* section, const char* key) { return r.find(section, key); };
  auto positive = [&](const Entry* e, double v) {
    if (!(v > 0.0)) r.fail(line_of(e), std::string(e ? e->key : "value") + ": must be positive");
  };

  if (auto* e = get("", "format")) {
    if (to_uint(r, *e, e->value) != kConfigFormat) {
      r.fail(e->line, "unsupported format version '" + e->value + "' (expected " +
                          std::to_string(kConfigFormat) + ")");
    }
  }
  if (auto* e = get("", "experiment")) {
    c.experiment = to_enum(r, *e, kExperiments);
  } else {
    r.fail(0, "missing top-level key 'experiment'");
  }

  // [scene]
  const Entry* incl_entry = get("scene", "inclusion_radius");
  if (incl_entry) c.inclusion_radii = to_list(r, *incl_entry);
  if (auto* e = get("scene", "outer_radius")) {
    c.outer_radius = to_double(r, *e, e->value);
    positive(e, c.outer_radius);
  }
  const Entry* eps_entry = get("scene", "eps");
  if (eps_entry) {
    if (eps_entry->value == "auto") {
      c.eps_rule = EpsRule::Auto;
    } else if (eps_entry->value == "h^3") {
      c.eps_rule = EpsRule::HCubed;
    } else {
      c.eps_rule = EpsRule::Fixed;
      c.eps = to_double(r, *eps_entry, eps_entry->value);
      positive(eps_entry, c.eps);
    }
  }

  // [medium]
  const Entry* ko = get("medium", "kappa_outer");
  if (ko) c.kappa_outer = to_parameter(r, *ko);
  const Entry* ki = get("medium", "kappa_inner");
  const Entry* ir = get("medium", "interface_radius");
  if (ir) c.interface_radius = to_parameter(r, *ir);
  if (ki) {
    c.kappa_inner = to_parameter(r, *ki);
  } else {
    c.kappa_inner = c.interface_radius ? Parameter::fixed(1.0) : c.kappa_outer;
  }
  for (const auto* e : {ko, ki}) {
    if (!e) continue;
    const Parameter p = to_parameter(r, *e);
    if (!(p.lo > 0.0)) r.fail(e->line, e->key + ": conductivity must be positive");
  }
  if (!c.interface_radius && ki &&
      (c.kappa_inner.lo != c.kappa_outer.lo || c.kappa_inner.hi != c.kappa_outer.hi)) {
    r.fail(ki->line, "kappa_inner differs from kappa_outer but no interface_radius is set");
  }

  // [bc]
  if (auto* e = get("bc", "model")) {
    c.cem = to_enum<bool>(r, *e, {{"cem", true}, {"idealized", false}});
  }
  const Entry* z_entry = get("bc", "z");
  if (z_entry) c.z = to_list(r, *z_entry);
  for (double z : c.z) positive(z_entry, z);
  if (auto* e = get("bc", "electrodes")) {
    c.electrodes = to_uint(r, *e, e->value);
    if (c.electrodes < 2) r.fail(e->line, "electrodes: need at least two");
  }
  const Entry* width_entry = get("bc", "electrode_width");
  if (width_entry) {
    c.electrode_width = to_double(r, *width_entry, width_entry->value);
    positive(width_entry, c.electrode_width);
  }
  if (auto* e = get("bc", "first_electrode_angle")) c.first_electrode_angle = to_double(r, *e, e->value);
  const Entry* volt_entry = get("bc", "voltages");
  if (volt_entry && volt_entry->value != "alternating") c.voltages = to_list(r, *volt_entry);
  const Entry* el_entry = get("bc", "electrode");
  if (el_entry) c.electrode = to_uint(r, *el_entry, el_entry->value);
  if (auto* e = get("bc", "phi")) {
    c.phi.clear();
    for (const auto& t : split(e->value, ',')) c.phi.push_back(to_term(r, *e, t));
  }
  if (auto* e = get("bc", "inclusion_potential")) c.inclusion_potential = to_double(r, *e, e->value);
  if (c.cem) {
    try {
      (void)c.layout();
    } catch (const std::exception& ex) {
      r.fail(line_of(width_entry), std::string("electrode layout: ") + ex.what());
    }
    if (!c.voltages.empty() && c.voltages.size() != c.electrodes) {
      r.fail(line_of(volt_entry), "voltages: expected " + std::to_string(c.electrodes) + " values");
    }
    try {
      (void)c.pattern();
    } catch (const std::exception& ex) {
      r.fail(line_of(volt_entry), std::string("voltages: ") + ex.what());
    }
    if (c.electrode < 1 || c.electrode > c.electrodes) {
      r.fail(line_of(el_entry), "electrode: label must lie in 1.." + std::to_string(c.electrodes));
    }
  }

  // [walk]
  const Entry* h_entry = get("walk", "h");
  if (h_entry) c.h = to_list(r, *h_entry);
  for (double h : c.h) positive(h_entry, h);
  if (auto* e = get("walk", "sampler")) c.sampler = to_enum(r, *e, kSamplers);
  if (auto* e = get("walk", "interface_scheme")) {
    c.interface_schemes.clear();
    for (const auto& s : split(e->value, ',')) c.interface_schemes.push_back(to_scheme(r, *e, s));
  }
  if (auto* e = get("walk", "max_steps")) {
    c.max_steps = to_uint(r, *e, e->value);
    if (c.max_steps == 0) r.fail(e->line, "max_steps: must be positive");
  }

  // [plan]
  if (auto* e = get("plan", "M1")) c.M1 = to_uint(r, *e, e->value);
  if (auto* e = get("plan", "M2")) c.M2 = to_uint(r, *e, e->value);
  if (auto* e = get("plan", "paths")) {
    c.paths = to_uint(r, *e, e->value);
    if (c.paths < 2) r.fail(e->line, "paths: need at least two");
  }
  if (c.M1 < 1 || c.M2 < 1) r.fail(line_of(get("plan", "M1")), "M1 and M2 must be at least 1");
  if (auto* e = get("plan", "independent_c")) c.independent_c = to_bool(r, *e);

  // [vr]
  const Entry* prov_entry = get("vr", "provider");
  if (prov_entry) {
    c.provider = to_enum<ProviderKind>(r, *prov_entry, {{"none", ProviderKind::None},
                                          {"reference", ProviderKind::Reference},
                                          {"nested", ProviderKind::Nested}});
  }
  if (auto* e = get("vr", "k")) {
    const auto k = to_uint(r, *e, e->value);
    if (k < 1 || k > 1000) r.fail(e->line, "k: must lie in 1..1000");
    c.nested_k = static_cast<int>(k);
  }
  if (auto* e = get("vr", "nested_sampler")) c.nested_sampler = to_enum(r, *e, kSamplers);
  if (auto* e = get("vr", "start_term")) {
    c.pointwise_start = to_enum<bool>(r, *e, {{"electrode_mean", false}, {"pointwise", true}});
  }
  const Entry* methods_entry = get("vr", "methods");
  if (methods_entry) {
    for (const auto& m : split(methods_entry->value, ',')) c.methods.push_back(to_method(r, *methods_entry, m));
  }

  // [reference]
  if (auto* e = get("reference", "modes")) {
    const auto k = to_uint(r, *e, e->value);
    if (k < 1 || k > 8192) r.fail(e->line, "modes: must lie in 1..8192");
    c.modes = static_cast<int>(k);
  }

  // [potential]
  if (auto* e = get("potential", "point")) {
    const auto xy = to_list(r, *e);
    if (xy.size() != 2) r.fail(e->line, "point: expected 'x, y'");
    c.point = {xy[0], xy[1]};
    if (c.point.norm() > c.outer_radius) r.fail(e->line, "point: outside the domain");
  }

  // [field]
  if (auto* e = get("field", "radial_points")) {
    c.radial_points = static_cast<int>(to_uint(r, *e, e->value));
    if (c.radial_points < 2) r.fail(e->line, "radial_points: need at least two");
  }
  if (auto* e = get("field", "angular_points")) {
    c.angular_points = static_cast<int>(to_uint(r, *e, e->value));
    if (c.angular_points < 4) r.fail(e->line, "angular_points: need at least four");
  }

  // [run]
  if (auto* e = get("run", "seed")) c.seed = to_uint(r, *e, e->value);
  if (auto* e = get("run", "workers")) {
    const auto w = to_uint(r, *e, e->value);
    if (w < 1 || w > 4096) r.fail(e->line, "workers: must lie in 1..4096");
    c.workers = static_cast<unsigned>(w);
  }
  if (auto* e = get("run", "block_size")) {
    c.block_size = to_uint(r, *e, e->value);
    if (c.block_size < 1) r.fail(e->line, "block_size: must be positive");
  }
  if (auto* e = get("run", "output")) c.output = e->value;

  r.check_all_used();

  // Cross-key model invariants, reported at the most specific line.
  const bool has_interface = c.interface_radius.has_value();
  for (double h : c.h) {
    const double eps = c.eps_for(h);
    auto interface_at = [&](double R) -> std::optional<Circle> {
      if (!has_interface) return std::nullopt;
      return Circle({0.0, 0.0}, R);
    };
    std::vector<double> radii = c.inclusion_radii;
    if (radii.empty()) radii.push_back(-1.0);
    for (double rad : radii) {
      std::vector<double> Rs{has_interface ? c.interface_radius->lo : 0.0};
      if (has_interface && c.interface_radius->random()) Rs.push_back(c.interface_radius->hi);
      for (double R : Rs) {
        try {
          SceneGeometry g(Circle({0.0, 0.0}, c.outer_radius),
                          rad > 0.0 ? std::optional<Circle>(Circle({0.0, 0.0}, rad)) : std::nullopt,
                          interface_at(R), eps);
        } catch (const std::exception& ex) {
          const Entry* where = incl_entry ? incl_entry : (ir ? ir : eps_entry);
          r.fail(line_of(where), std::string("scene: ") + ex.what());
        }
      }
    }
  }
  if (!c.cem && c.experiment != Experiment::Potential) {
    r.fail(0, std::string(to_string(c.experiment)) + " needs bc.model = cem");
  }
  if (c.cem && c.experiment == Experiment::Potential) {
    r.fail(0, "potential needs bc.model = idealized");
  }
  if (c.random_medium() && c.provider == ProviderKind::Reference) {
    r.fail(line_of(prov_entry), "provider: the reference control variate needs a deterministic medium");
  }
  if (c.experiment == Experiment::Efficiency && c.methods.empty()) {
    r.fail(0, "efficiency needs vr.methods");
  }
  if (c.random_medium()) {
    for (const auto& m : c.methods) {
      if (m.kind == MethodSpec::Reference) {
        r.fail(line_of(methods_entry), "methods: reference needs a deterministic medium");
      }
    }
  }
  if ((c.experiment == Experiment::BiasStudy || c.experiment == Experiment::Potential) && c.h.empty()) {
    r.fail(line_of(h_entry), "h: need at least one step size");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream o;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s;
  };
  o << "format = " << kConfigFormat << "\n";
  o << "experiment = " << to_string(c.experiment) << "\n";

  o << "\n[scene]\n";
  o << "outer_radius = " << format_double(c.outer_radius) << "\n";
  if (!c.inclusion_radii.empty()) o << "inclusion_radius = " << list(c.inclusion_radii) << "\n";
  o << "eps = "
    << (c.eps_rule == EpsRule::Auto ? "auto" : c.eps_rule == EpsRule::HCubed ? "h^3" : format_double(c.eps))
    << "\n";

  o << "\n[medium]\n";
  o << "kappa_outer = " << parameter_text(c.kappa_outer) << "\n";
  o << "kappa_inner = " << parameter_text(c.kappa_inner) << "\n";
  if (c.interface_radius) o << "interface_radius = " << parameter_text(*c.interface_radius) << "\n";

  o << "\n[bc]\n";
  o << "model = " << (c.cem ? "cem" : "idealized") << "\n";
  o << "z = " << list(c.z) << "\n";
  if (c.cem) {
    o << "electrodes = " << c.electrodes << "\n";
    o << "electrode_width = " << format_double(c.electrode_width) << "\n";
    o << "first_electrode_angle = " << format_double(c.first_electrode_angle) << "\n";
    o << "voltages = " << (c.voltages.empty() ? std::string("alternating") : list(c.voltages)) << "\n";
    o << "electrode = " << c.electrode << "\n";
  } else {
    o << "phi = ";
    for (std::size_t i = 0; i < c.phi.size(); ++i) {
      o << (i ? ", " : "") << c.phi[i].k << ":" << format_double(c.phi[i].a) << ":"
        << format_double(c.phi[i].b);
    }
    o << "\n";
    o << "inclusion_potential = " << format_double(c.inclusion_potential) << "\n";
  }

  o << "\n[walk]\n";
  o << "h = " << list(c.h) << "\n";
  o << "sampler = " << sampler_name(c.sampler) << "\n";
  o << "interface_scheme = ";
  for (std::size_t i = 0; i < c.interface_schemes.size(); ++i) {
    o << (i ? ", " : "") << scheme_name(c.interface_schemes[i]);
  }
  o << "\n";
  o << "max_steps = " << c.max_steps << "\n";

  o << "\n[plan]\n";
  o << "M1 = " << c.M1 << "\nM2 = " << c.M2 << "\npaths = " << c.paths << "\n";
  o << "independent_c = " << (c.independent_c ? "true" : "false") << "\n";

  o << "\n[vr]\n";
  o << "provider = "
    << (c.provider == ProviderKind::None ? "none"
                                         : c.provider == ProviderKind::Reference ? "reference" : "nested")
    << "\n";
  o << "k = " << c.nested_k << "\n";
  o << "nested_sampler = " << sampler_name(c.nested_sampler) << "\n";
  o << "start_term = " << (c.pointwise_start ? "pointwise" : "electrode_mean") << "\n";
  if (!c.methods.empty()) {
    o << "methods = ";
    for (std::size_t i = 0; i < c.methods.size(); ++i) o << (i ? ", " : "") << c.methods[i].label();
    o << "\n";
  }

  o << "\n[reference]\nmodes = " << c.modes << "\n";
  o << "\n[potential]\npoint = " << format_double(c.point.x) << ", " << format_double(c.point.y) << "\n";
  o << "\n[field]\nradial_points = " << c.radial_points << "\nangular_points = " << c.angular_points
    << "\n";

  o << "\n[run]\n";
  o << "seed = " << c.seed << "\nworkers = " << c.workers << "\nblock_size = " << c.block_size << "\n";
  if (!c.output.empty()) o << "output = " << c.output << "\n";
  return o.str();
}

std::string config_hash(const ExperimentConfig& c) {
  // Worker count and output path do not change results.
  ExperimentConfig canon = c;
  canon.workers = 1;
  canon.output.clear();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize(canon)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace prwos::tools
