#include "diverge/ctm_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "diverge/errors.hpp"

namespace diverge {
namespace {

constexpr double kBoundSlack = 1e-9;
constexpr double kEmptyCell = 1e-12;
constexpr double kCflSlack = 1e-12;

std::vector<double> expand(const std::vector<double>& values, int cells) {
  if (values.size() == 1) return std::vector<double>(cells, values.front());
  return values;
}

double checked_density(double rho, double jam, int link, int cell) {
  if (rho < -kBoundSlack || rho > jam + kBoundSlack || !std::isfinite(rho)) {
    std::ostringstream msg;
    msg << "density " << rho << " left [0, " << jam << "] in link " << link << " cell "
        << cell + 1;
    throw NumericalStabilityError(msg.str());
  }
  return std::clamp(rho, 0.0, jam);
}

}  // namespace

double BoundaryCondition::evaluate(std::int64_t n, double dt, double neighbour,
                                   double capacity) const {
  switch (kind) {
    case Kind::Neumann:
      return neighbour;
    case Kind::Constant:
      return std::clamp(value, 0.0, capacity);
    case Kind::Sinusoid:
      return std::clamp(
          value + amplitude * std::sin(static_cast<double>(n) * std::numbers::pi * dt / period),
          0.0, capacity);
  }
  return neighbour;
}

double SimConfig::cfl_number() const {
  double fastest = 0.0;
  for (const auto& fd : diagrams) fastest = std::max(fastest, fd.max_wave_speed());
  return fastest * dt() / dx();
}

void SimConfig::validate() const {
  if (cells_per_link < 1 || time_steps < 1) throw ParameterError("grid needs M >= 1 and N >= 1");
  if (!(link_length > 0.0) || !(horizon > 0.0)) {
    throw ParameterError("link length and horizon must be positive");
  }
  if (field_interval < 1) throw ParameterError("field_interval must be at least 1");
  for (int i = 0; i < 3; ++i) {
    const auto& rho = initial_densities[i];
    if (rho.size() != 1 && rho.size() != static_cast<std::size_t>(cells_per_link)) {
      std::ostringstream msg;
      msg << "link " << i << " needs 1 or " << cells_per_link << " initial densities, got "
          << rho.size();
      throw ParameterError(msg.str());
    }
    for (double r : rho) {
      if (!(r >= 0.0) || r > diagrams[i].jam_density()) {
        std::ostringstream msg;
        msg << "initial density " << r << " on link " << i << " outside [0, "
            << diagrams[i].jam_density() << "]";
        throw ParameterError(msg.str());
      }
    }
  }
  for (const Split& xi : {initial_xi(), inflow_xi()}) {
    if (xi[0] < 0.0 || xi[1] < 0.0 || xi[0] + xi[1] > 1.0 + 1e-12) {
      throw ParameterError("commodity proportions must be nonnegative and sum to at most 1");
    }
  }
  if (cfl_number() > 1.0 + kCflSlack) {
    std::ostringstream msg;
    msg << "CFL number " << cfl_number() << " exceeds 1";
    throw ParameterError(msg.str());
  }
}

SimState initial_state(const SimConfig& config) {
  const int m = config.cells_per_link;
  SimState s;
  for (int i = 0; i < 3; ++i) s.density[i] = expand(config.initial_densities[i], m);
  const Split xi = config.initial_xi();
  for (int k = 0; k < 2; ++k) s.proportion[k].assign(m, xi[k]);
  return s;
}

double proportion_update(double rho_old, double rho_new, double xi_old, double xi_upstream,
                         double q_in, double q_out, double dt_over_dx) {
  return proportion_update(rho_old, rho_new, xi_old, xi_upstream, q_in, q_out, xi_old * q_out,
                           dt_over_dx);
}

double proportion_update(double /*rho_old*/, double rho_new, double xi_old, double xi_upstream,
                         double q_in, double q_out, double q_out_commodity,
                         double dt_over_dx) {
  if (rho_new < kEmptyCell) return xi_old;
  // Algebraically identical to (rho_old xi_old + dt/dx (q_in xi_up - q_out_i)) / rho_new
  // after substituting the density update; equal proportions stay bit-exact.
  const double xi = xi_old + dt_over_dx *
                                 (q_in * (xi_upstream - xi_old) + (xi_old * q_out - q_out_commodity)) /
                                 rho_new;
  return std::clamp(xi, 0.0, 1.0);
}

SimState step(const SimState& state, const SimConfig& config, StepRecord* record) {
  const int m = config.cells_per_link;
  const double dt = config.dt();
  const double lambda = dt / config.dx();
  const std::int64_t n = state.step_index;
  const auto& fd = config.diagrams;

  std::array<std::vector<double>, 3> demand;
  std::array<std::vector<double>, 3> supply;
  for (int i = 0; i < 3; ++i) {
    demand[i].resize(m);
    supply[i].resize(m);
    for (int c = 0; c < m; ++c) {
      demand[i][c] = fd[i].demand(state.density[i][c]);
      supply[i][c] = fd[i].supply(state.density[i][c]);
    }
  }

  // flux[i][c] is the flux through the upstream face of cell c; flux[i][m] is the exit face.
  std::array<std::vector<double>, 3> flux;
  for (int i = 0; i < 3; ++i) {
    flux[i].resize(m + 1);
    for (int c = 1; c < m; ++c) flux[i][c] = std::min(demand[i][c - 1], supply[i][c]);
  }

  const double ghost_demand =
      config.boundaries.upstream_demand.evaluate(n, dt, demand[0][0], fd[0].capacity());
  flux[0][0] = std::min(ghost_demand, supply[0][0]);

  const Split xi_last{state.proportion[0][m - 1], state.proportion[1][m - 1]};
  const FluxTriple junction =
      local_discrete_flux(config.model, demand[0][m - 1], supply[1][0], supply[2][0], xi_last);
  flux[0][m] = junction.q0;
  flux[1][0] = junction.q1;
  flux[2][0] = junction.q2;

  for (int i = 1; i <= 2; ++i) {
    const double ghost_supply = config.boundaries.downstream_supply[i - 1].evaluate(
        n, dt, supply[i][m - 1], fd[i].capacity());
    flux[i][m] = std::min(demand[i][m - 1], ghost_supply);
  }

  SimState next;
  next.step_index = n + 1;
  for (int i = 0; i < 3; ++i) {
    next.density[i].resize(m);
    for (int c = 0; c < m; ++c) {
      const double rho = state.density[i][c] + lambda * (flux[i][c] - flux[i][c + 1]);
      next.density[i][c] = checked_density(rho, fd[i].jam_density(), i, c);
    }
  }

  const Split inflow_xi = config.inflow_xi();
  const std::array<double, 2> junction_commodity{junction.q1, junction.q2};
  for (int k = 0; k < 2; ++k) {
    const auto& xi = state.proportion[k];
    auto& out = next.proportion[k];
    out.resize(m);
    for (int c = 0; c < m; ++c) {
      const double xi_up = c == 0 ? inflow_xi[k] : xi[c - 1];
      if (c == m - 1 && config.model.is_fifo_family()) {
        out[c] = proportion_update(state.density[0][c], next.density[0][c], xi[c], xi_up,
                                   flux[0][c], flux[0][c + 1], junction_commodity[k], lambda);
      } else {
        out[c] = proportion_update(state.density[0][c], next.density[0][c], xi[c], xi_up,
                                   flux[0][c], flux[0][c + 1], lambda);
      }
    }
  }

  if (record != nullptr) {
    record->step = n;
    record->junction = junction;
    record->demand_up = demand[0][m - 1];
    record->supply_1 = supply[1][0];
    record->supply_2 = supply[2][0];
    record->xi_last = xi_last;
    record->inflow = flux[0][0];
    record->outflow = {flux[1][m], flux[2][m]};
  }
  return next;
}

double total_vehicles(const SimState& state, double dx) {
  double total = 0.0;
  for (const auto& link : state.density) {
    for (double rho : link) total += rho * dx;
  }
  return total;
}

Trajectory run(const SimConfig& config) {
  config.validate();
  Trajectory traj;
  traj.dx = config.dx();
  traj.dt = config.dt();
  SimState state = initial_state(config);
  traj.snapshots.push_back(state);
  traj.junction_trace.reserve(static_cast<std::size_t>(config.time_steps));
  for (std::int64_t n = 0; n < config.time_steps; ++n) {
    StepRecord rec;
    state = step(state, config, &rec);
    traj.total_inflow += traj.dt * rec.inflow;
    traj.total_outflow += traj.dt * (rec.outflow[0] + rec.outflow[1]);
    traj.junction_trace.push_back(rec);
    if ((n + 1) % config.field_interval == 0 || n + 1 == config.time_steps) {
      traj.snapshots.push_back(state);
    }
  }
  traj.final_state = std::move(state);
  return traj;
}

std::vector<EpsilonSample> solution_difference(const Trajectory& a, const Trajectory& b,
                                               double dx) {
  if (a.snapshots.size() != b.snapshots.size()) {
    throw ArgumentError("trajectories record different numbers of snapshots");
  }
  std::vector<EpsilonSample> series;
  series.reserve(a.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const SimState& sa = a.snapshots[k];
    const SimState& sb = b.snapshots[k];
    if (sa.step_index != sb.step_index) throw ArgumentError("snapshot steps differ");
    double eps = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (sa.density[i].size() != sb.density[i].size()) {
        throw ArgumentError("trajectories use different grids");
      }
      for (std::size_t c = 0; c < sa.density[i].size(); ++c) {
        eps += std::abs(sa.density[i][c] - sb.density[i][c]) * dx;
      }
    }
    series.push_back({sa.step_index, eps});
  }
  return series;
}

}  // namespace diverge
