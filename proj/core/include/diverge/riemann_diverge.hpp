#pragma once

#include <array>
#include <optional>

#include "diverge/diverge_model.hpp"
#include "diverge/fundamental_diagram.hpp"
#include "diverge/traffic_state.hpp"

namespace diverge {

/// Initial states on the upstream link 0 and the downstream links 1 and 2,
/// each paired with the diagram it lives on.
struct RiemannInput {
  std::array<TrafficState, 3> states;
  std::array<FundamentalDiagram, 3> diagrams;

  [[nodiscard]] double capacity(int link) const { return diagrams.at(link).capacity(); }

  /// Builds the input from link densities.
  static RiemannInput from_densities(const std::array<FundamentalDiagram, 3>& diagrams,
                                     const std::array<double, 3>& densities);
  /// Throws InvalidStateError if any state is inconsistent with its diagram.
  void validate() const;
};

struct FluxTriple {
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;

  [[nodiscard]] double downstream(int i) const { return i == 1 ? q1 : q2; }
};

struct RiemannSolution {
  FluxTriple flux;
  TrafficState stationary_upstream;
  std::array<TrafficState, 2> stationary_downstream;
  TrafficState interior_upstream;
  std::array<TrafficState, 2> interior_downstream;
  /// Interior commodity proportions; empty for evacuation models when q0 = 0.
  std::optional<Split> interior_proportions;
  /// Link 0, 1, 2: whether the interior state is the only admissible choice.
  std::array<bool, 3> interior_unique{true, true, true};
};

enum class Side { Upstream, Downstream };

/// Global continuous fluxes of the model. q0 is reported as q1 + q2.
FluxTriple solve_fluxes(const DivergeModel& model, const RiemannInput& input);

/// Fluxes, stationary states, interior states and interior proportions.
RiemannSolution solve(const DivergeModel& model, const RiemannInput& input);

/// Upstream: U0- = (D0, C0) or (C0, S) with S < D0.
/// Downstream: Ui+ = (Ci, Si) or (D, Ci) with D < Si.
bool check_stationary_admissible(const TrafficState& stationary, const TrafficState& initial,
                                 Side side, double capacity);

/// Admissibility of an interior state next to an admissible stationary state.
bool check_interior_admissible(const TrafficState& interior, const TrafficState& stationary,
                               Side side, double capacity);

/// Local discrete flux F(D0(0-), S1(0+), S2(0+)). The CTM junction calls this.
/// interior_xi is read by DaganzoFifo and Lebacque only; PartialEvacuation
/// uses the model's predefined proportions.
FluxTriple local_discrete_flux(const DivergeModel& model, const TrafficState& interior_up,
                               const std::array<TrafficState, 2>& interior_down,
                               const Split& interior_xi);

/// Same as above from the three scalars the formulas actually read.
FluxTriple local_discrete_flux(const DivergeModel& model, double demand_up, double supply_1,
                               double supply_2, const Split& interior_xi);

}  // namespace diverge
