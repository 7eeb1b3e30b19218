#pragma once

#include <string_view>

#include "diverge/fundamental_diagram.hpp"
#include "diverge/traffic_state.hpp"

namespace diverge {

enum class Criticality {
  UnderCritical,
  StrictlyUnderCritical,
  OverCritical,
  StrictlyOverCritical,
  Critical,
};

std::string_view to_string(Criticality c);

/// True for SUC, UC and Critical (S = C).
bool is_under_critical(Criticality c);
/// True for SOC, OC and Critical (D = C).
bool is_over_critical(Criticality c);

/// (D(rho), S(rho)) on the given diagram.
TrafficState state_of(const FundamentalDiagram& fd, double rho);

/// q(U) = min(D, S).
double local_flux(const TrafficState& u);

/// Returns Critical, StrictlyUnderCritical or StrictlyOverCritical; the
/// non-strict tags are predicates, see is_under_critical/is_over_critical.
/// Throws InvalidStateError when neither component equals capacity.
Criticality classify(const TrafficState& u, double capacity);

}  // namespace diverge
