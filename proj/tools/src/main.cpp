#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prwos/estimators.hpp"
#include "prwos/tools/config.hpp"
#include "prwos/tools/experiments.hpp"

namespace {

// Exit codes double as machine-readable error categories.
enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kNumerical = 4,
  kIo = 5,
};

int report(const char* category, const std::string& message, int code) {
  std::cerr << "error[" << category << "]: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace prwos::tools;

  CLI::App app{"Partially reflecting walk-on-spheres experiments for the EIT forward problem"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
  bool deterministic = false;
  bool quiet = false;

  struct Command {
    const char* name;
    const char* help;
    std::optional<Experiment> experiment;
  };
  const Command commands[] = {
      {"run", "run the experiment named in the config", std::nullopt},
      {"potential", "point values of the idealized problem over an h sweep", Experiment::Potential},
      {"currents", "reference, direct and variance-reduced electrode currents", Experiment::Currents},
      {"bias", "bias of the electrode current against h, with the fitted order", Experiment::BiasStudy},
      {"efficiency", "variance times CPU time for several methods", Experiment::Efficiency},
      {"random-medium", "expected currents under a random layered medium", Experiment::RandomMedium},
      {"field", "reference potential and boundary current density samples", Experiment::FieldExport},
  };
  std::optional<Experiment> chosen;
  bool check_only = false;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("-c,--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override run.seed");
    sub->add_option("--workers", workers, "override run.workers")->check(CLI::Range(1u, 4096u));
    sub->add_option("-o,--out", out, "CSV output path (default: run.output, else stdout)");
    sub->add_flag("--deterministic", deterministic, "omit timing columns and metadata");
    sub->add_flag("-q,--quiet", quiet, "no progress output on stderr");
    const auto experiment = cmd.experiment;
    sub->callback([&chosen, experiment] { chosen = experiment; });
  }
  auto* check = app.add_subcommand("check", "validate a config and print its canonical form");
  check->add_option("-c,--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
  check->callback([&check_only] { check_only = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    return report("config", e.what(), kConfig);
  } catch (const std::exception& e) {
    return report("io", e.what(), kIo);
  }
  if (check_only) {
    std::cout << serialize(config);
    return kOk;
  }
  if (chosen && *chosen != config.experiment) {
    return report("usage",
                  "subcommand runs '" + std::string(to_string(*chosen)) + "' but " + config_path +
                      " declares experiment = " + std::string(to_string(config.experiment)),
                  kUsage);
  }
  if (seed) config.seed = *seed;
  if (workers) config.workers = *workers;
  if (!out.empty()) config.output = out;

  RunSettings settings;
  settings.timing = !deterministic;
  if (!quiet) settings.log = &std::cerr;

  OutputTable table({"empty"});
  try {
    table = run_experiment(config, settings);
  } catch (const prwos::CensoringError& e) {
    return report("numerical", e.what(), kNumerical);
  } catch (const std::invalid_argument& e) {
    return report("model", e.what(), kConfig);
  } catch (const std::logic_error& e) {
    return report("numerical", e.what(), kNumerical);
  } catch (const std::runtime_error& e) {
    return report("numerical", e.what(), kNumerical);
  } catch (const std::exception& e) {
    return report("internal", e.what(), kInternal);
  }

  if (config.output.empty() || config.output == "-") {
    table.write_csv(std::cout);
    return kOk;
  }
  std::ofstream os(config.output, std::ios::binary);
  if (!os) return report("io", "cannot write '" + config.output + "'", kIo);
  table.write_csv(os);
  if (!os) return report("io", "write to '" + config.output + "' failed", kIo);
  return kOk;
}
