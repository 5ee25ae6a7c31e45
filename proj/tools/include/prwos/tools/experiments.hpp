#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "prwos/estimators.hpp"
#include "prwos/medium.hpp"
#include "prwos/tools/config.hpp"
#include "prwos/tools/output_table.hpp"

namespace prwos::tools {

struct RunSettings {
  // Off: drop timing columns and metadata so output depends only on
  // (config, seed).
  bool timing = true;
  std::ostream* log = nullptr;  // progress lines, when set
};

std::string version_string();

// Model for one inclusion radius (nullopt: none) and contact impedance.
ForwardModel build_model(const ExperimentConfig& config, std::optional<double> inclusion_radius,
                         double z, double h);
WalkParams walk_params(const ExperimentConfig& config, double h,
                       InterfaceScheme scheme = InterfaceScheme::EqualStep);
RunOptions run_options(const ExperimentConfig& config);

// Columns: z, scheme, h, eps, estimate, std_error, reference,
// bias_vs_reference, n, mean_boundary_hits, eoc [, cpu_time].
OutputTable run_potential(const ExperimentConfig& config, const RunSettings& settings = {});

// One row per (z, h, r): reference, direct and (with a provider and an
// inclusion) variance-reduced currents of the reported electrode.
OutputTable run_currents(const ExperimentConfig& config, const RunSettings& settings = {});

// Direct-method bias of the reported electrode current over the h sweep,
// with the fitted EOC per z.
OutputTable run_bias_study(const ExperimentConfig& config, const RunSettings& settings = {});

// sigma, CPU time and C = variance * time for each method and radius.
OutputTable run_efficiency(const ExperimentConfig& config, const RunSettings& settings = {});

// Expected currents over the medium law: direct and nested-walk VR.
OutputTable run_random_medium(const ExperimentConfig& config, const RunSettings& settings = {});

// Polar-grid potential (kind 0) and boundary samples (kind 1) of the
// reference solution.
OutputTable run_field_export(const ExperimentConfig& config, const RunSettings& settings = {});

OutputTable run_experiment(const ExperimentConfig& config, const RunSettings& settings = {});

}  // namespace prwos::tools
