#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "diverge/diverge_model.hpp"
#include "diverge/fundamental_diagram.hpp"
#include "diverge/riemann_diverge.hpp"

namespace diverge {

/// Boundary demand (upstream) or supply (downstream) of a ghost cell.
struct BoundaryCondition {
  enum class Kind { Neumann, Constant, Sinusoid };

  Kind kind = Kind::Neumann;
  /// Constant flux, or the mean a of a + b sin(n pi dt / c).
  double value = 0.0;
  double amplitude = 0.0;
  double period = 1.0;

  static BoundaryCondition neumann() { return {}; }
  static BoundaryCondition constant(double flux) { return {Kind::Constant, flux, 0.0, 1.0}; }
  static BoundaryCondition sinusoid(double mean, double amplitude, double period) {
    return {Kind::Sinusoid, mean, amplitude, period};
  }

  /// Ghost value at step n; `neighbour` is the adjacent cell's value used by
  /// Neumann. Non-Neumann values are clamped to [0, capacity].
  [[nodiscard]] double evaluate(std::int64_t n, double dt, double neighbour,
                                double capacity) const;
};

struct BoundarySpec {
  BoundaryCondition upstream_demand;
  std::array<BoundaryCondition, 2> downstream_supply;
};

struct SimConfig {
  int cells_per_link = 160;
  std::int64_t time_steps = 6400;
  double link_length = 10.0;
  double horizon = 360.0;
  DivergeModel model = DivergeModel::lebacque({0.7, 0.3});
  std::array<FundamentalDiagram, 3> diagrams{FundamentalDiagram::del_castillo_mainline(),
                                             FundamentalDiagram::del_castillo_mainline(),
                                             FundamentalDiagram::del_castillo_ramp()};
  /// One value means uniform; otherwise exactly cells_per_link values.
  std::array<std::vector<double>, 3> initial_densities{std::vector<double>{1.0},
                                                       std::vector<double>{1.0},
                                                       std::vector<double>{0.1}};
  /// Link-0 commodity proportions at t = 0 and of the vehicles entering
  /// link 0. Default to the model's predefined proportions.
  std::optional<Split> initial_proportions;
  std::optional<Split> inflow_proportions;
  BoundarySpec boundaries;
  /// Full-field snapshot every this many steps; step 0 and step N are always kept.
  std::int64_t field_interval = 50;

  [[nodiscard]] double dx() const { return link_length / cells_per_link; }
  [[nodiscard]] double dt() const { return horizon / static_cast<double>(time_steps); }
  /// max over links of max|Q'| dt/dx.
  [[nodiscard]] double cfl_number() const;
  [[nodiscard]] Split initial_xi() const { return initial_proportions.value_or(model.xi()); }
  [[nodiscard]] Split inflow_xi() const { return inflow_proportions.value_or(model.xi()); }

  /// Throws ParameterError on a malformed grid, bad densities or a CFL violation.
  void validate() const;
};

struct SimState {
  std::array<std::vector<double>, 3> density;
  /// Commodity 1 and 2 proportions per cell of link 0.
  std::array<std::vector<double>, 2> proportion;
  std::int64_t step_index = 0;
};

/// Everything that crossed the junction and the boundaries during one step.
struct StepRecord {
  std::int64_t step = 0;
  FluxTriple junction;
  /// D_{0,M}, S_{1,1}, S_{2,1} fed to the junction.
  double demand_up = 0.0;
  double supply_1 = 0.0;
  double supply_2 = 0.0;
  Split xi_last{};
  double inflow = 0.0;
  std::array<double, 2> outflow{};
};

struct Trajectory {
  std::vector<SimState> snapshots;
  std::vector<StepRecord> junction_trace;
  SimState final_state;
  /// Time-integrated boundary fluxes (vehicles).
  double total_inflow = 0.0;
  double total_outflow = 0.0;
  double dx = 0.0;
  double dt = 0.0;
};

SimState initial_state(const SimConfig& config);

/// Advances one step. Throws NumericalStabilityError if a density leaves
/// [0, jam] by more than 1e-9.
SimState step(const SimState& state, const SimConfig& config, StepRecord* record = nullptr);

/// xi^{n+1} for a cell whose commodity outflow is xi_old * q_out.
double proportion_update(double rho_old, double rho_new, double xi_old, double xi_upstream,
                         double q_in, double q_out, double dt_over_dx);

/// Variant for the junction cell where the commodity leaves at its own rate.
double proportion_update(double rho_old, double rho_new, double xi_old, double xi_upstream,
                         double q_in, double q_out, double q_out_commodity,
                         double dt_over_dx);

Trajectory run(const SimConfig& config);

/// Vehicles on all three links.
double total_vehicles(const SimState& state, double dx);

/// eps(n dt) = sum over links and cells |rho_a - rho_b| dx for each shared snapshot.
struct EpsilonSample {
  std::int64_t step = 0;
  double epsilon = 0.0;
};
std::vector<EpsilonSample> solution_difference(const Trajectory& a, const Trajectory& b,
                                               double dx);

}  // namespace diverge
