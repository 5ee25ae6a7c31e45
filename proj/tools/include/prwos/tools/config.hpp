#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "prwos/medium.hpp"
#include "prwos/walk.hpp"

namespace prwos::tools {

inline constexpr int kConfigFormat = 1;

// A validation failure tied to a config line (0 when the key is missing).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string source_;
  int line_;
  std::string message_;
};

enum class Experiment { Potential, Currents, BiasStudy, Efficiency, RandomMedium, FieldExport };

std::string_view to_string(Experiment e);

enum class EpsRule { Fixed, Auto, HCubed };

enum class ProviderKind { None, Reference, Nested };

// One variance-reduction method in an efficiency comparison.
struct MethodSpec {
  enum Kind { Direct, Reference, Nested } kind = Direct;
  Sampler sampler = Sampler::Uncentered;
  int k = 0;

  std::string label() const;  // "direct", "reference", "rw10", "uw2", ...
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Currents;

  // [scene]
  double outer_radius = 1.0;
  std::vector<double> inclusion_radii;  // empty: no inclusion
  EpsRule eps_rule = EpsRule::Auto;
  double eps = 1e-6;

  // [medium]
  Parameter kappa_outer = Parameter::fixed(1.0);
  Parameter kappa_inner = Parameter::fixed(1.0);
  std::optional<Parameter> interface_radius;

  // [bc]
  bool cem = true;
  std::vector<double> z{0.1};
  std::size_t electrodes = 8;
  double electrode_width = 0.1;
  double first_electrode_angle = 1.5707963267948966;
  std::vector<double> voltages;  // empty: alternating
  std::size_t electrode = 3;     // 1-based label of the reported electrode
  std::vector<FourierTerm> phi{{4, 1.0, 0.0}};
  double inclusion_potential = 0.0;

  // [walk]
  std::vector<double> h{0.004};
  Sampler sampler = Sampler::Centered;
  std::vector<InterfaceScheme> interface_schemes{InterfaceScheme::EqualStep};
  std::uint64_t max_steps = 10'000'000;

  // [plan]
  std::uint64_t M1 = 1;
  std::uint64_t M2 = 1000;
  std::uint64_t paths = 100000;
  bool independent_c = false;

  // [vr]
  ProviderKind provider = ProviderKind::None;
  int nested_k = 10;
  Sampler nested_sampler = Sampler::Uncentered;
  bool pointwise_start = false;
  std::vector<MethodSpec> methods;

  // [reference]
  int modes = 256;

  // [potential]
  Point point{0.99361, 0.11286};

  // [field]
  int radial_points = 21;
  int angular_points = 256;

  // [run]
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t block_size = 4096;
  std::string output;

  double eps_for(double h) const;
  ElectrodeLayout layout() const;
  VoltagePattern pattern() const;
  bool random_medium() const;
};

// Parses the sectioned key = value format. Unknown sections or keys, bad
// values and violated model invariants raise ConfigError with the line.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path);

// Canonical text: every key in a fixed order, numbers in shortest
// round-trip form. parse_config(serialize(c)) reproduces c.
std::string serialize(const ExperimentConfig& config);

// FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

std::string format_double(double v);

}  // namespace prwos::tools
