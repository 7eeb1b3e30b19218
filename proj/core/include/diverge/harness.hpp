#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "diverge/riemann_diverge.hpp"
#include "diverge/run_config.hpp"

namespace diverge {

struct Report {
  std::string title;
  bool passed = true;
  std::vector<std::string> lines;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  /// Appends "PASS name: detail" or "FAIL name: detail" and folds the verdict.
  void check(bool ok, const std::string& name, const std::string& detail);
  void note(const std::string& line);
  [[nodiscard]] std::string render() const;
};

using FluxSolver = std::function<FluxTriple(const DivergeModel&, const RiemannInput&)>;

/// Writes the report to out_dir/report when out_dir is non-empty.
void write_report(const Report& report, const std::filesystem::path& out_dir);

/// Simulates config.sim and compares the junction-adjacent cells, fluxes and
/// wave fronts at t = T with the analytical solution.
Report riemann_verify(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Lebacque against DaganzoFifo for each resolution; eps(T) must decrease.
Report convergence_study(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Sweeps (S1, S2) at fixed D0 and labels the binding constraint.
Report flux_map(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Randomized and grid properties of the analytical solver. `solver` replaces
/// solve_fluxes so that a deliberately broken solver can be fed in.
Report property_suite(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                      const FluxSolver& solver = solve_fluxes);

}  // namespace diverge
