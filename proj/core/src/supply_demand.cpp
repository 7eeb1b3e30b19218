#include "diverge/supply_demand.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diverge/errors.hpp"

namespace diverge {

std::string_view to_string(Criticality c) {
  switch (c) {
    case Criticality::UnderCritical: return "UC";
    case Criticality::StrictlyUnderCritical: return "SUC";
    case Criticality::OverCritical: return "OC";
    case Criticality::StrictlyOverCritical: return "SOC";
    case Criticality::Critical: return "critical";
  }
  return "unknown";
}

bool is_under_critical(Criticality c) {
  return c == Criticality::UnderCritical || c == Criticality::StrictlyUnderCritical ||
         c == Criticality::Critical;
}

bool is_over_critical(Criticality c) {
  return c == Criticality::OverCritical || c == Criticality::StrictlyOverCritical ||
         c == Criticality::Critical;
}

TrafficState state_of(const FundamentalDiagram& fd, double rho) {
  return {fd.demand(rho), fd.supply(rho)};
}

double local_flux(const TrafficState& u) { return std::min(u.demand, u.supply); }

Criticality classify(const TrafficState& u, double capacity) {
  const bool s_full = std::abs(u.supply - capacity) <= kFluxTolerance;
  const bool d_full = std::abs(u.demand - capacity) <= kFluxTolerance;
  if (std::abs(u.demand - u.supply) < kFluxTolerance && (s_full || d_full)) {
    return Criticality::Critical;
  }
  if (s_full && d_full) return Criticality::Critical;
  if (s_full) return Criticality::StrictlyUnderCritical;
  if (d_full) return Criticality::StrictlyOverCritical;
  std::ostringstream msg;
  msg << "state (" << u.demand << ", " << u.supply << ") has no component at capacity "
      << capacity;
  throw InvalidStateError(msg.str());
}

}  // namespace diverge
