#include "diverge/riemann_diverge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "diverge/errors.hpp"
#include "diverge/supply_demand.hpp"

namespace diverge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Two flux triples closer than this describe the same junction behaviour.
constexpr double kSameFlux = 1e-9;

bool near(double a, double b) { return std::abs(a - b) <= kFluxTolerance; }

bool same_state(const TrafficState& a, const TrafficState& b) {
  return near(a.demand, b.demand) && near(a.supply, b.supply);
}

FluxTriple make_triple(double q1, double q2) { return {q1 + q2, q1, q2}; }

double evacuation_term(double supply_j, double xi_j) {
  return xi_j > 0.0 ? supply_j / xi_j - supply_j : kInf;
}

// Shared by the global and local forms of the three evacuation rules, which
// have the same functional form.
FluxTriple evacuation_fluxes(const DivergeModel& model, double d0, double s1, double s2,
                             double c1, double c2) {
  const std::array<double, 2> s{s1, s2};
  std::array<double, 2> q{};
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    switch (model.kind()) {
      case ModelKind::SupplyProportional:
        q[i] = std::min(s[i], std::max(d0 - s[j], d0 * (i == 0 ? c1 : c2) / (c1 + c2)));
        break;
      case ModelKind::PriorityBased:
        q[i] = std::min(s[i], std::max(d0 - s[j], model.alpha()[i] * d0));
        break;
      case ModelKind::PartialEvacuation:
        q[i] = std::min({s[i], evacuation_term(s[j], model.xi()[j]),
                         std::max(d0 - s[j], model.alpha()[i] * d0)});
        break;
      default:
        throw InternalConsistencyError("evacuation_fluxes called for a FIFO model");
    }
    q[i] = std::max(q[i], 0.0);
  }
  return make_triple(q[0], q[1]);
}

bool fluxes_match(const FluxTriple& a, const FluxTriple& b) {
  return std::abs(a.q1 - b.q1) <= kSameFlux && std::abs(a.q2 - b.q2) <= kSameFlux;
}

// Candidate values for a free interior component on [0, cap], dense near the
// canonical value so that one-sided families are detected.
std::vector<double> scan_points(double canonical, double cap) {
  std::vector<double> pts;
  constexpr int kGrid = 64;
  for (int k = 0; k <= kGrid; ++k) pts.push_back(cap * k / kGrid);
  for (double rel : {1e-7, 1e-5, 1e-3, 1e-1}) {
    pts.push_back(std::clamp(canonical + rel * cap, 0.0, cap));
    pts.push_back(std::clamp(canonical - rel * cap, 0.0, cap));
  }
  return pts;
}

// A link's interior state is unique when no other admissible interior state,
// with the other links held at their canonical interiors, reproduces the fluxes.
std::array<bool, 3> uniqueness_flags(const DivergeModel& model, const RiemannInput& input,
                                     const RiemannSolution& sol, const Split& xi_hat) {
  std::array<bool, 3> unique{true, true, true};
  const double d_hat = sol.interior_upstream.demand;
  const std::array<double, 2> s_hat{sol.interior_downstream[0].supply,
                                    sol.interior_downstream[1].supply};

  const Criticality up = classify(sol.stationary_upstream, input.capacity(0));
  if (up != Criticality::StrictlyOverCritical) {
    for (double d : scan_points(d_hat, input.capacity(0))) {
      if (std::abs(d - d_hat) <= kFluxTolerance) continue;
      if (fluxes_match(local_discrete_flux(model, d, s_hat[0], s_hat[1], xi_hat), sol.flux)) {
        unique[0] = false;
        break;
      }
    }
  }
  for (int i = 0; i < 2; ++i) {
    const Criticality c = classify(sol.stationary_downstream[i], input.capacity(i + 1));
    if (c == Criticality::StrictlyUnderCritical) continue;
    for (double s : scan_points(s_hat[i], input.capacity(i + 1))) {
      if (std::abs(s - s_hat[i]) <= kFluxTolerance) continue;
      std::array<double, 2> trial = s_hat;
      trial[i] = s;
      if (fluxes_match(local_discrete_flux(model, d_hat, trial[0], trial[1], xi_hat), sol.flux)) {
        unique[i + 1] = false;
        break;
      }
    }
  }
  return unique;
}

}  // namespace

RiemannInput RiemannInput::from_densities(const std::array<FundamentalDiagram, 3>& diagrams,
                                          const std::array<double, 3>& densities) {
  RiemannInput in{{}, diagrams};
  for (int i = 0; i < 3; ++i) in.states[i] = state_of(diagrams[i], densities[i]);
  return in;
}

void RiemannInput::validate() const {
  for (int i = 0; i < 3; ++i) {
    const TrafficState& u = states[i];
    if (u.demand < 0.0 || u.supply < 0.0) {
      std::ostringstream msg;
      msg << "link " << i << " state has a negative component";
      throw InvalidStateError(msg.str());
    }
    classify(u, capacity(i));
  }
}

FluxTriple solve_fluxes(const DivergeModel& model, const RiemannInput& input) {
  input.validate();
  const double d0 = input.states[0].demand;
  const double s1 = input.states[1].supply;
  const double s2 = input.states[2].supply;
  if (model.is_fifo_family()) {
    const Split& xi = model.xi();
    const double q0 = std::min({d0, s1 / xi[0], s2 / xi[1]});
    return make_triple(xi[0] * q0, xi[1] * q0);
  }
  return evacuation_fluxes(model, d0, s1, s2, input.capacity(1), input.capacity(2));
}

FluxTriple local_discrete_flux(const DivergeModel& model, double demand_up, double supply_1,
                               double supply_2, const Split& interior_xi) {
  switch (model.kind()) {
    case ModelKind::DaganzoFifo: {
      if (!(interior_xi[0] > 0.0) || !(interior_xi[1] > 0.0)) {
        throw ParameterError("Daganzo junction needs strictly positive interior proportions");
      }
      const double q0 =
          std::min({demand_up, supply_1 / interior_xi[0], supply_2 / interior_xi[1]});
      return make_triple(interior_xi[0] * q0, interior_xi[1] * q0);
    }
    case ModelKind::Lebacque:
      return make_triple(std::min(interior_xi[0] * demand_up, supply_1),
                         std::min(interior_xi[1] * demand_up, supply_2));
    case ModelKind::SupplyProportional: {
      const double total = supply_1 + supply_2;
      if (!(total > 0.0)) return {};
      const double ratio = std::min(1.0, demand_up / total);
      return make_triple(ratio * supply_1, ratio * supply_2);
    }
    case ModelKind::PriorityBased:
    case ModelKind::PartialEvacuation:
      // c1, c2 are unused by these two rules.
      return evacuation_fluxes(model, demand_up, supply_1, supply_2, 1.0, 1.0);
  }
  return {};
}

FluxTriple local_discrete_flux(const DivergeModel& model, const TrafficState& interior_up,
                               const std::array<TrafficState, 2>& interior_down,
                               const Split& interior_xi) {
  return local_discrete_flux(model, interior_up.demand, interior_down[0].supply,
                             interior_down[1].supply, interior_xi);
}

RiemannSolution solve(const DivergeModel& model, const RiemannInput& input) {
  RiemannSolution sol;
  sol.flux = solve_fluxes(model, input);
  const double d0 = input.states[0].demand;
  const double c0 = input.capacity(0);
  const std::array<double, 2> s{input.states[1].supply, input.states[2].supply};
  const std::array<double, 2> c{input.capacity(1), input.capacity(2)};
  const std::array<double, 2> q{sol.flux.q1, sol.flux.q2};

  const bool up_binding = sol.flux.q0 >= d0 - kFluxTolerance;
  sol.stationary_upstream = up_binding ? TrafficState{d0, c0} : TrafficState{c0, sol.flux.q0};
  std::array<bool, 2> down_binding{};
  for (int i = 0; i < 2; ++i) {
    down_binding[i] = q[i] >= s[i] - kFluxTolerance;
    sol.stationary_downstream[i] =
        down_binding[i] ? TrafficState{c[i], s[i]} : TrafficState{q[i], c[i]};
  }
  sol.interior_upstream = sol.stationary_upstream;
  sol.interior_downstream = sol.stationary_downstream;

  Split xi_hat = model.xi();
  switch (model.kind()) {
    case ModelKind::DaganzoFifo:
      sol.interior_proportions = model.xi();
      break;
    case ModelKind::Lebacque:
      // Upstream SOC puts C0 at the junction; a non-binding link i then needs
      // xi_i(0-) C0 = q_i. With no non-binding link the predefined split works.
      if (!up_binding) {
        for (int i = 0; i < 2; ++i) {
          if (!down_binding[i] && down_binding[1 - i]) {
            xi_hat[i] = q[i] / c0;
            xi_hat[1 - i] = 1.0 - xi_hat[i];
          }
        }
      }
      sol.interior_proportions = xi_hat;
      break;
    case ModelKind::SupplyProportional:
      if (d0 > kFluxTolerance && s[0] + s[1] > d0 + kFluxTolerance) {
        for (int i = 0; i < 2; ++i) {
          const int j = 1 - i;
          const double share = c[i] * d0 / (c[0] + c[1]);
          const double other_share = c[j] * d0 / (c[0] + c[1]);
          if (s[i] <= share + kFluxTolerance && s[j] > other_share + kFluxTolerance) {
            sol.interior_downstream[i] = {c[i], c[j] * s[i] / (d0 - s[i])};
          }
        }
      }
      [[fallthrough]];
    case ModelKind::PriorityBased:
    case ModelKind::PartialEvacuation:
      if (sol.flux.q0 > kFluxTolerance) {
        sol.interior_proportions = Split{q[0] / sol.flux.q0, q[1] / sol.flux.q0};
      }
      break;
  }

  sol.interior_unique = uniqueness_flags(model, input, sol, xi_hat);
  return sol;
}

bool check_stationary_admissible(const TrafficState& stationary, const TrafficState& initial,
                                 Side side, double capacity) {
  if (side == Side::Upstream) {
    const double d0 = initial.demand;
    if (near(stationary.demand, d0) && near(stationary.supply, capacity)) return true;
    return near(stationary.demand, capacity) && stationary.supply < d0 - kFluxTolerance;
  }
  const double si = initial.supply;
  if (near(stationary.demand, capacity) && near(stationary.supply, si)) return true;
  return near(stationary.supply, capacity) && stationary.demand < si - kFluxTolerance;
}

bool check_interior_admissible(const TrafficState& interior, const TrafficState& stationary,
                               Side side, double capacity) {
  if (interior.demand < -kFluxTolerance || interior.supply < -kFluxTolerance) return false;
  if (!near(std::max(interior.demand, interior.supply), capacity)) return false;
  const Criticality c = classify(stationary, capacity);
  if (side == Side::Upstream) {
    if (c == Criticality::StrictlyOverCritical) return same_state(interior, stationary);
    return interior.supply >= stationary.demand - kFluxTolerance;
  }
  if (c == Criticality::StrictlyUnderCritical) return same_state(interior, stationary);
  return interior.demand >= stationary.supply - kFluxTolerance;
}

}  // namespace diverge
