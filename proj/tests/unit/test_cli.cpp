#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <string>

#include "prwos/tools/config.hpp"
#include "prwos/tools/experiments.hpp"

using namespace prwos;
using namespace prwos::tools;

namespace {

const char* kSmallCurrents = R"(format = 1
experiment = currents

[scene]
inclusion_radius = 0.5, 0.3

[bc]
model = cem
z = 0.5

[walk]
h = 0.05

[plan]
M2 = 200

[vr]
provider = reference

[reference]
modes = 64

[run]
seed = 5
block_size = 64
)";

int error_line(const std::string& text) {
  try {
    parse_config(text, "t.ini");
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("shipped configs survive a canonical round trip") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(PRWOS_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path().string());
    const auto text = serialize(c);
    const auto again = parse_config(text);
    CHECK(serialize(again) == text);
    CHECK(config_hash(again) == config_hash(c));
    ++seen;
  }
  CHECK(seen >= 8);
}

TEST_CASE("config errors carry the offending line") {
  CHECK(error_line("format = 1\nexperiment = currents\n[scene]\ninclusion_radius = 0.3\nbogus = 2\n") == 5);
  CHECK(error_line("format = 1\nexperiment = currents\n[nowhere]\n") == 3);
  CHECK(error_line("format = 1\nexperiment = currents\n[walk]\nh = 0.1\nh = 0.2\n") == 5);
  CHECK(error_line("format = 1\nexperiment = currents\n[walk]\nh = fast\n") == 4);
  CHECK(error_line("format = 2\n") == 1);
  CHECK(error_line("format = 1\n[bc]\nmodel = cem\n") == 0);
  // Radius beyond the outer disk fails scene validation.
  CHECK(error_line(std::string("format = 1\nexperiment = currents\n[scene]\ninclusion_radius = 1.2\n[bc]\nmodel = cem\n")) >= 0);
}

TEST_CASE("worker count and seed handling") {
  auto c = parse_config(kSmallCurrents);
  const auto h = config_hash(c);
  c.workers = 7;
  c.output = "elsewhere.csv";
  CHECK(config_hash(c) == h);
  c.seed = 6;
  CHECK(config_hash(c) != h);
}

TEST_CASE("deterministic output is byte-identical across worker counts") {
  RunSettings s;
  s.timing = false;
  auto c = parse_config(kSmallCurrents);
  c.workers = 1;
  const auto one = run_experiment(c, s).to_csv();
  c.workers = 4;
  const auto four = run_experiment(c, s).to_csv();
  c.workers = 32;
  const auto many = run_experiment(c, s).to_csv();
  CHECK(one == four);
  CHECK(one == many);
  CHECK(one.find("wall_time") == std::string::npos);
  CHECK(one.find("J_vr") != std::string::npos);
}

TEST_CASE("currents without an inclusion omit the control-variate columns") {
  std::string text = kSmallCurrents;
  text.replace(text.find("inclusion_radius = 0.5, 0.3"), 27, "");
  text.replace(text.find("provider = reference"), 20, "provider = none");
  const auto t = run_currents(parse_config(text), {false, nullptr});
  CHECK(t.rows().size() == 1);
  CHECK_THROWS(t.column_index("J_vr"));
  CHECK(t.at(0, "c_direct") == 0.0);
  CHECK(std::abs(t.at(0, "J_direct") - t.at(0, "J_ref")) < 4.0 * t.at(0, "se_direct") + 0.05);
}

TEST_CASE("boundary current density integrates to the electrode currents") {
  const auto c = parse_config(R"(format = 1
experiment = field_export
[scene]
inclusion_radius = 0.3
[bc]
model = cem
z = 0.1
[reference]
modes = 256
[field]
radial_points = 3
angular_points = 128
)");
  const auto t = run_field_export(c, {false, nullptr});
  const auto layout = ElectrodeLayout::standard_eight();
  const double half = 0.05;
  std::vector<double> J(8, 0.0);
  double gap_max = 0.0;
  double edge = 0.0;
  double centre = 0.0;
  std::size_t nb = 0;
  for (std::size_t i = 0; i < t.rows().size(); ++i) nb += t.at(i, "kind") == 1.0;
  const double dtheta = 2.0 * kPi / static_cast<double>(nb);
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    if (t.at(i, "kind") != 1.0) continue;
    const double th = t.at(i, "theta");
    const double flux = t.at(i, "flux");
    // J_l is the electrode mean of the current density.
  // Nearest electrode; the gaps carry no current, so the sector integral is
    // insensitive to how the truncated series smears the edge peaks.
    std::size_t nearest = 0;
    for (std::size_t k = 1; k < 8; ++k) {
      if (std::abs(wrap_angle(th - layout.arcs()[k].center_angle)) <
          std::abs(wrap_angle(th - layout.arcs()[nearest].center_angle))) {
        nearest = k;
      }
    }
    J[nearest] += flux * dtheta / (2.0 * half);
    const auto l = layout.electrode_index(th);
    if (!l) {
      // Truncation ripple decays away from the edges.
      double d = kPi;
      for (const auto& a : layout.arcs()) {
        d = std::min(d, std::abs(std::abs(wrap_angle(th - a.center_angle)) - a.half_width));
      }
      if (d > 0.03) gap_max = std::max(gap_max, std::abs(flux));
      continue;
    }
    if (*l == 2) {
      const double d = std::abs(wrap_angle(th));
      if (d < 0.005) centre = std::max(centre, std::abs(flux));
      if (d > half - 0.015) edge = std::max(edge, std::abs(flux));
    }
  }
  const auto meta = *t.meta("J_ref");
  std::vector<double> ref;
  for (std::size_t pos = 0; pos < meta.size();) {
    std::size_t used = 0;
    ref.push_back(std::stod(meta.substr(pos), &used));
    pos += used;
    while (pos < meta.size() && (meta[pos] == ',' || meta[pos] == ' ')) ++pos;
  }
  REQUIRE(ref.size() == 8);
  for (std::size_t l = 0; l < 8; ++l) {
    CAPTURE(l);
    CHECK(J[l] == doctest::Approx(ref[l]).epsilon(0.02));
  }
  CHECK(gap_max < 0.1 * std::abs(ref[2]));
  // Shunting: density peaks near the electrode edges.
  CHECK(edge > 1.1 * centre);
}

TEST_CASE("a degenerate random medium reproduces the fixed-medium currents") {
  std::string fixed = kSmallCurrents;
  fixed.replace(fixed.find("provider = reference"), 20, "provider = nested\nk = 4");
  std::string random = fixed;
  random.replace(random.find("experiment = currents"), 21, "experiment = random_medium");
  const RunSettings s{false, nullptr};
  const auto a = run_currents(parse_config(fixed), s);
  const auto b = run_random_medium(parse_config(random), s);
  REQUIRE(a.rows().size() == b.rows().size());
  for (std::size_t i = 0; i < a.rows().size(); ++i) {
    CHECK(a.at(i, "J_direct") == b.at(i, "E_J_direct"));
    CHECK(a.at(i, "J_vr") == b.at(i, "E_J_vr"));
    CHECK(a.at(i, "J_ref") == doctest::Approx(b.at(i, "E_J_ref")).epsilon(1e-10));
  }
}
