#include "diverge/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <utility>

#include "diverge/errors.hpp"
#include "diverge/oracle.hpp"
#include "diverge/supply_demand.hpp"
#include "diverge/tabular.hpp"
#include "diverge/wave_solver.hpp"

namespace diverge {
namespace {

std::string num(double v) { return format_number(v); }

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << v;
  return s.str();
}

Report make_report(const std::string& title, const ExperimentConfig& cfg) {
  Report r;
  r.title = title;
  r.config_hash = cfg.config_hash;
  r.seed = cfg.seed;
  return r;
}

std::string state_text(const TrafficState& u) {
  return "(" + num(u.demand) + ", " + num(u.supply) + ")";
}

std::string input_text(const RiemannInput& in) {
  return "U0=" + state_text(in.states[0]) + " U1=" + state_text(in.states[1]) +
         " U2=" + state_text(in.states[2]) + " C=(" + num(in.capacity(0)) + ", " +
         num(in.capacity(1)) + ", " + num(in.capacity(2)) + ")";
}

std::string model_text(const DivergeModel& m) {
  std::string s(to_string(m.kind()));
  s += " xi=(" + num(m.xi()[0]) + ", " + num(m.xi()[1]) + ")";
  s += " alpha=(" + num(m.alpha()[0]) + ", " + num(m.alpha()[1]) + ")";
  return s;
}

double max_flux_gap(const FluxTriple& a, const FluxTriple& b) {
  return std::max({std::abs(a.q0 - b.q0), std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2)});
}

// ---------------------------------------------------------------------------
// riemann-verify

struct Comparison {
  RiemannInput input;
  RiemannSolution solution;
  std::array<WaveDescription, 3> waves;
  Trajectory trajectory;
  /// Sum of the absolute state, density and flux errors that were compared.
  double total_error = 0.0;
};

RiemannInput junction_input(const SimConfig& sim) {
  const int m = sim.cells_per_link;
  auto pick = [&](int link, int cell) {
    const auto& v = sim.initial_densities[link];
    return v.size() == 1 ? v.front() : v.at(cell);
  };
  return RiemannInput::from_densities(sim.diagrams, {pick(0, m - 1), pick(1, 0), pick(2, 0)});
}

std::array<double, 3> junction_densities(const SimState& s) {
  return {s.density[0].back(), s.density[1].front(), s.density[2].front()};
}

Comparison compare(const SimConfig& sim, double tol, Report* report) {
  Comparison c{junction_input(sim), {}, {}, {}, 0.0};
  c.solution = solve(sim.model, c.input);
  c.waves = link_waves(c.solution, c.input);
  c.trajectory = run(sim);
  const SimState& fin = c.trajectory.final_state;
  const auto rho = junction_densities(fin);
  const std::array<TrafficState, 3> interior{c.solution.interior_upstream,
                                             c.solution.interior_downstream[0],
                                             c.solution.interior_downstream[1]};
  const char* side_name[3] = {"link 0 cell M", "link 1 cell 1", "link 2 cell 1"};

  for (int i = 0; i < 3; ++i) {
    const FundamentalDiagram& fd = sim.diagrams[i];
    const TrafficState numeric = state_of(fd, rho[i]);
    if (!c.solution.interior_unique[i]) {
      if (report) {
        report->note(std::string(side_name[i]) + ": interior state not unique, numerical " +
                     state_text(numeric) + " not compared");
      }
      continue;
    }
    const double rho_exact = fd.density_from_state(interior[i]);
    const double err_state = std::max(std::abs(numeric.demand - interior[i].demand),
                                      std::abs(numeric.supply - interior[i].supply));
    const double err_rho = std::abs(rho[i] - rho_exact);
    c.total_error += err_state + err_rho;
    if (report) {
      report->check(err_state < tol, std::string(side_name[i]) + " state",
                    "numerical " + state_text(numeric) + " analytical " +
                        state_text(interior[i]) + " max error " + num(err_state));
      report->check(err_rho < tol, std::string(side_name[i]) + " density",
                    "numerical " + num(rho[i]) + " analytical " + num(rho_exact));
    }
  }

  const FluxTriple& qn = c.trajectory.junction_trace.back().junction;
  const double flux_err = max_flux_gap(qn, c.solution.flux);
  c.total_error += flux_err;
  if (report) {
    report->check(flux_err < tol, "junction fluxes",
                  "numerical (" + num(qn.q0) + ", " + num(qn.q1) + ", " + num(qn.q2) +
                      ") analytical (" + num(c.solution.flux.q0) + ", " +
                      num(c.solution.flux.q1) + ", " + num(c.solution.flux.q2) + ")");
  }
  return c;
}

void check_proportions(const SimConfig& sim, const Comparison& c, double tol, Report& report) {
  const SimState& fin = c.trajectory.final_state;
  const int m = sim.cells_per_link;
  if (sim.model.is_fifo_family() && c.solution.interior_proportions) {
    const double num_xi = fin.proportion[0][m - 1];
    const double exact = (*c.solution.interior_proportions)[0];
    report.check(std::abs(num_xi - exact) < tol, "last-cell proportion",
                 "xi1 numerical " + num(num_xi) + " analytical " + num(exact));
  }
  const Split initial = sim.initial_xi();
  if (initial == sim.inflow_xi() && sim.initial_densities[0].size() == 1) {
    int changed = 0;
    for (int cell = 0; cell + 1 < m; ++cell) {
      if (fin.proportion[0][cell] != initial[0] || fin.proportion[1][cell] != initial[1]) {
        ++changed;
      }
    }
    report.check(changed == 0, "untouched proportions",
                 std::to_string(changed) + " of " + std::to_string(m - 1) +
                     " upstream cells differ from xi1=" + num(initial[0]));
  }
}

void check_fronts(const SimConfig& sim, const Comparison& c, Report& report) {
  const double dx = sim.dx();
  const double L = sim.link_length;
  const double T = sim.horizon;
  const int m = sim.cells_per_link;
  for (int i = 0; i < 3; ++i) {
    const WaveDescription& w = c.waves[i];
    const std::string link = "link " + std::to_string(i);
    if (w.kind != WaveKind::Shock) {
      report.note(link + ": " + std::string(to_string(w.kind)) + " speeds [" +
                  num(w.speed_min) + ", " + num(w.speed_max) + "]");
      continue;
    }
    const double predicted = i == 0 ? L + w.speed_min * T : w.speed_min * T;
    if (predicted < 2 * dx || predicted > L - 2 * dx) {
      report.note(link + ": shock speed " + num(w.speed_min) + " front at " + num(predicted) +
                  " is outside the link at t=T; not tracked");
      continue;
    }
    const auto& rho = c.trajectory.final_state.density[i];
    int best = 0;
    for (int k = 0; k + 1 < m; ++k) {
      if (std::abs(rho[k + 1] - rho[k]) > std::abs(rho[best + 1] - rho[best])) best = k;
    }
    const double observed = (best + 1) * dx;
    report.check(std::abs(observed - predicted) <= dx, link + " shock front",
                 "speed " + num(w.speed_min) + " predicted x=" + num(predicted) +
                     " observed x=" + num(observed) + " cell width " + num(dx));
  }
}

// ---------------------------------------------------------------------------
// flux-map labels

std::string label_from_set(bool d0, bool s1, bool s2) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += "+";
    out += name;
  };
  add(d0, "D0");
  add(s1, "S1");
  add(s2, "S2");
  return out.empty() ? "none" : out;
}

constexpr double kLabelTol = 1e-12;

// The bounds met by the computed fluxes.
std::string binding_label(const FluxTriple& q, double d0, double s1, double s2) {
  return label_from_set(std::abs(q.q0 - d0) <= kLabelTol, std::abs(q.q1 - s1) <= kLabelTol,
                        std::abs(q.q2 - s2) <= kLabelTol);
}

// The same bounds predicted from the inputs alone.
std::string predicted_label(const DivergeModel& model, double d0, double s1, double s2,
                            double c1, double c2) {
  if (model.is_fifo_family()) {
    const double a = d0;
    const double b = s1 / model.xi()[0];
    const double c = s2 / model.xi()[1];
    const double q = std::min({a, b, c});
    return label_from_set(a - q <= kLabelTol, b - q <= kLabelTol, c - q <= kLabelTol);
  }
  Split alpha = model.alpha();
  if (model.kind() == ModelKind::SupplyProportional) alpha = {c1 / (c1 + c2), c2 / (c1 + c2)};
  if (s1 + s2 <= d0 + kLabelTol) {
    return label_from_set(std::abs(s1 + s2 - d0) <= kLabelTol, true, true);
  }
  const bool tight1 = s1 <= alpha[0] * d0 + kLabelTol;
  const bool tight2 = s2 <= alpha[1] * d0 + kLabelTol;
  return label_from_set(true, tight1, tight2);
}

std::string fifo_region(const std::string& binding) {
  static const std::map<std::string, std::string> names{
      {"D0", "I"},          {"S1", "II"},          {"S2", "III"},
      {"D0+S1", "I|II"},    {"D0+S2", "I|III"},    {"S1+S2", "II|III"},
      {"D0+S1+S2", "I|II|III"}};
  const auto it = names.find(binding);
  return it == names.end() ? binding : it->second;
}

// ---------------------------------------------------------------------------
// property suite

struct Property {
  explicit Property(std::string n) : name(std::move(n)) {}

  std::string name;
  std::int64_t checked = 0;
  std::int64_t failed = 0;
  double worst = 0.0;
  std::string counterexample;

  void record(bool ok, double gap, const std::string& where) {
    ++checked;
    worst = std::max(worst, gap);
    if (!ok && failed++ == 0) counterexample = where;
  }
};

FundamentalDiagram random_diagram(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return FundamentalDiagram::del_castillo_mainline();
    case 1: return FundamentalDiagram::del_castillo_ramp();
    case 2: return FundamentalDiagram::greenshields(0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng));
    default:
      return FundamentalDiagram::triangular(0.5 + 1.5 * u(rng), 0.2 + 1.3 * u(rng),
                                            0.5 + 1.5 * u(rng));
  }
}

double random_density(std::mt19937_64& rng, const FundamentalDiagram& fd) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pick = u(rng);
  if (pick < 0.05) return 0.0;
  if (pick < 0.10) return fd.critical_density();
  if (pick < 0.13) return fd.jam_density();
  return fd.jam_density() * u(rng);
}

struct ModelSet {
  DivergeModel daganzo;
  DivergeModel lebacque;
  DivergeModel proportional;
  DivergeModel priority;
  DivergeModel partial;
};

ModelSet random_models(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double xi1 = 0.05 + 0.9 * u(rng);
  const double a1 = u(rng);
  const double p1 = 0.6 * u(rng);
  const double p2 = (1.0 - p1) * u(rng);
  const double pa1 = p1 + (1.0 - p2 - p1) * u(rng);
  return {DivergeModel::daganzo_fifo({xi1, 1.0 - xi1}), DivergeModel::lebacque({xi1, 1.0 - xi1}),
          DivergeModel::supply_proportional(), DivergeModel::priority_based({a1, 1.0 - a1}),
          DivergeModel::partial_evacuation({p1, p2}, {pa1, 1.0 - pa1})};
}

SimConfig random_sim(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SimConfig sim;
  sim.cells_per_link = 8 + static_cast<int>(16 * u(rng));
  sim.link_length = 1.0 + 9.0 * u(rng);
  for (int i = 0; i < 3; ++i) sim.diagrams[i] = random_diagram(rng);
  const ModelSet ms = random_models(rng);
  const DivergeModel choices[5] = {ms.daganzo, ms.lebacque, ms.proportional, ms.priority,
                                   ms.partial};
  sim.model = choices[std::uniform_int_distribution<int>(0, 4)(rng)];
  double fastest = 0.0;
  for (const auto& fd : sim.diagrams) fastest = std::max(fastest, fd.max_wave_speed());
  const double ratio = (0.3 + 0.7 * u(rng)) / fastest;
  sim.time_steps = 50 + static_cast<int>(250 * u(rng));
  sim.horizon = ratio * sim.dx() * static_cast<double>(sim.time_steps);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> rho(sim.cells_per_link);
    for (double& r : rho) r = random_density(rng, sim.diagrams[i]);
    sim.initial_densities[i] = rho;
  }
  if (sim.model.is_fifo_family()) {
    sim.inflow_proportions = sim.model.xi();
  }
  auto boundary = [&](double cap) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: return BoundaryCondition::neumann();
      case 1: return BoundaryCondition::constant(cap * u(rng));
      default: return BoundaryCondition::sinusoid(cap * u(rng), cap * u(rng), 1.0 + 10.0 * u(rng));
    }
  };
  sim.boundaries.upstream_demand = boundary(sim.diagrams[0].capacity());
  sim.boundaries.downstream_supply = {boundary(sim.diagrams[1].capacity()),
                                      boundary(sim.diagrams[2].capacity())};
  sim.field_interval = sim.time_steps;
  return sim;
}

}  // namespace

void Report::check(bool ok, const std::string& name, const std::string& detail) {
  lines.push_back(std::string(ok ? "PASS " : "FAIL ") + name + ": " + detail);
  passed = passed && ok;
}

void Report::note(const std::string& line) { lines.push_back("NOTE " + line); }

std::string Report::render() const {
  std::ostringstream out;
  out << title << '\n';
  out << "config_hash " << hex(config_hash) << '\n';
  out << "seed " << seed << '\n';
  for (const auto& l : lines) out << l << '\n';
  out << "verdict " << (passed ? "PASS" : "FAIL") << '\n';
  return out.str();
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  if (out_dir.empty()) return;
  std::ofstream(out_dir / "report") << report.render();
}

Report riemann_verify(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  Report report = make_report("riemann-verify", config);
  const SimConfig& sim = config.sim;
  const double tol = config.verify.tolerance;
  report.note("model " + model_text(sim.model) + ", M=" + std::to_string(sim.cells_per_link) +
              ", N=" + std::to_string(sim.time_steps) + ", CFL=" + num(sim.cfl_number()));

  const Comparison fine = compare(sim, tol, &report);
  report.note("analytical input " + input_text(fine.input));
  report.note("analytical stationary U0-=" + state_text(fine.solution.stationary_upstream) +
              " U1+=" + state_text(fine.solution.stationary_downstream[0]) +
              " U2+=" + state_text(fine.solution.stationary_downstream[1]));
  check_proportions(sim, fine, tol, report);
  check_fronts(sim, fine, report);

  const double drift = total_vehicles(fine.trajectory.final_state, sim.dx()) -
                       total_vehicles(fine.trajectory.snapshots.front(), sim.dx()) -
                       (fine.trajectory.total_inflow - fine.trajectory.total_outflow);
  report.check(std::abs(drift) <= 1e-8 * std::max(1.0, total_vehicles(
                                                          fine.trajectory.snapshots.front(),
                                                          sim.dx())),
               "conservation", "vehicle drift " + num(drift));

  if (config.verify.coarse_cells > 0) {
    SimConfig coarse = sim;
    coarse.cells_per_link = config.verify.coarse_cells;
    const double steps = static_cast<double>(sim.time_steps) * coarse.cells_per_link /
                         sim.cells_per_link;
    coarse.time_steps = static_cast<std::int64_t>(std::llround(steps));
    coarse.field_interval = coarse.time_steps;
    const Comparison rough = compare(coarse, tol, nullptr);
    report.check(fine.total_error < rough.total_error, "refinement",
                 "error at M=" + std::to_string(sim.cells_per_link) + " " +
                     num(fine.total_error) + " vs M=" + std::to_string(coarse.cells_per_link) +
                     " " + num(rough.total_error));
  }

  if (!out_dir.empty()) {
    write_fields(out_dir / "fields.csv", fine.trajectory.snapshots);
    write_junction_trace(out_dir / "junction.csv", fine.trajectory.junction_trace);
  }
  write_report(report, out_dir);
  return report;
}

Report convergence_study(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  Report report = make_report("converge", config);
  const SimConfig& base = config.sim;
  if (!config.converge.against && !base.model.is_fifo_family()) {
    report.check(false, "model", "no converge.against model and no split to build Daganzo from");
    write_report(report, out_dir);
    return report;
  }
  const DivergeModel against =
      config.converge.against.value_or(DivergeModel::daganzo_fifo(base.model.xi()));
  report.note("comparing " + model_text(base.model) + " with " + model_text(against));
  std::vector<int> resolutions = config.converge.resolutions;
  std::vector<double> finals;
  for (int m : resolutions) {
    SimConfig sim = base;
    sim.cells_per_link = m;
    sim.time_steps = static_cast<std::int64_t>(config.converge.steps_per_cell) * m;
    if (sim.time_steps % config.converge.epsilon_samples != 0) {
      throw ConfigError("converge.epsilon_samples must divide steps_per_cell * M for M=" +
                        std::to_string(m));
    }
    sim.field_interval = sim.time_steps / config.converge.epsilon_samples;
    const Trajectory a = run(sim);
    sim.model = against;
    const Trajectory b = run(sim);
    const auto eps = solution_difference(a, b, sim.dx());
    finals.push_back(eps.back().epsilon);
    double peak = 0.0;
    for (const auto& e : eps) peak = std::max(peak, e.epsilon);
    report.note("M=" + std::to_string(m) + " N=" + std::to_string(sim.time_steps) +
                " eps(T)=" + num(eps.back().epsilon) + " max eps=" + num(peak));
    if (!out_dir.empty()) {
      write_epsilon(out_dir / ("epsilon_M" + std::to_string(m) + ".csv"), eps);
    }
  }
  for (std::size_t k = 1; k < finals.size(); ++k) {
    const bool finer = resolutions[k] > resolutions[k - 1];
    report.check(finer && finals[k] < finals[k - 1],
                 "eps(T) M=" + std::to_string(resolutions[k]) + " < M=" +
                     std::to_string(resolutions[k - 1]),
                 num(finals[k]) + " < " + num(finals[k - 1]));
  }
  write_report(report, out_dir);
  return report;
}

Report flux_map(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  Report report = make_report("flux-map", config);
  const SimConfig& sim = config.sim;
  const DivergeModel& model = sim.model;
  const double c0 = sim.diagrams[0].capacity();
  const double c1 = sim.diagrams[1].capacity();
  const double c2 = sim.diagrams[2].capacity();
  const double d0 = config.flux_map.demand < 0.0 ? c0 : std::min(config.flux_map.demand, c0);
  const int n = config.flux_map.grid_points;
  const bool cross_check = model.kind() != ModelKind::PartialEvacuation;

  std::unique_ptr<CsvWriter> csv;
  if (!out_dir.empty()) {
    csv = std::make_unique<CsvWriter>(out_dir / "flux_map.csv",
                                      std::initializer_list<std::string_view>{
                                          "region", "d0", "s1", "s2", "q0", "q1", "q2"});
  }
  std::map<std::string, int> counts;
  int mismatches = 0;
  int region_one_bad = 0;
  std::string first_mismatch;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double s1 = c1 * a / (n - 1);
      const double s2 = c2 * b / (n - 1);
      RiemannInput in{{TrafficState{d0, c0}, TrafficState{c1, s1}, TrafficState{c2, s2}},
                      sim.diagrams};
      const FluxTriple q = solve_fluxes(model, in);
      const std::string bind = binding_label(q, d0, s1, s2);
      std::string label = model.is_fifo_family() ? fifo_region(bind) : bind;
      if (cross_check) {
        const std::string predicted = predicted_label(model, d0, s1, s2, c1, c2);
        if (predicted != bind) {
          if (mismatches++ == 0) {
            first_mismatch = "s1=" + num(s1) + " s2=" + num(s2) + " predicted " + predicted +
                             " binding " + bind;
          }
        }
      }
      if (model.is_fifo_family() && label == "I") {
        const double gap = std::max(std::abs(q.q1 - model.xi()[0] * d0),
                                    std::abs(q.q2 - model.xi()[1] * d0));
        if (gap > 1e-12) ++region_one_bad;
      }
      ++counts[label];
      if (csv) csv->row({label}, {d0, s1, s2, q.q0, q.q1, q.q2});
    }
  }
  report.note("model " + model_text(model) + ", D0=" + num(d0) + ", grid " +
              std::to_string(n) + "x" + std::to_string(n));
  for (const auto& [label, count] : counts) {
    report.note("region " + label + ": " + std::to_string(count) + " points");
  }
  if (cross_check) {
    report.check(mismatches == 0, "region labels agree",
                 std::to_string(mismatches) + " mismatches" +
                     (first_mismatch.empty() ? "" : ", first " + first_mismatch));
  }
  if (model.is_fifo_family()) {
    report.check(region_one_bad == 0, "region I fluxes",
                 std::to_string(region_one_bad) + " points with q_i != xi_i D0");
  }
  RiemannInput corner{{TrafficState{d0, c0}, TrafficState{c1, 0.0}, TrafficState{c2, 0.0}},
                      sim.diagrams};
  const FluxTriple qc = solve_fluxes(model, corner);
  report.check(qc.q1 == 0.0 && qc.q2 == 0.0, "corner (0, 0)",
               "q=(" + num(qc.q1) + ", " + num(qc.q2) + ")");
  write_report(report, out_dir);
  return report;
}

Report property_suite(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                      const FluxSolver& solver) {
  Report report = make_report("props", config);
  std::mt19937_64 rng(config.seed);

  Property conservation{"conservation q0 = q1 + q2"};
  Property bounds{"bounds q0 <= D0, qi <= Si, q >= 0"};
  Property fifo{"FIFO qi = xi_i q0"};
  Property dag_leb{"Daganzo = Lebacque fluxes and stationary states"};
  Property sp_pri{"SupplyProportional = PriorityBased(C_i/(C1+C2))"};
  Property partial_fifo{"PartialEvacuation(sum xi = 1) = DaganzoFifo"};
  Property partial_pri{"PartialEvacuation(xi = 0) = PriorityBased"};
  Property route{"PartialEvacuation qi >= xi_i q0"};
  Property optimal{"evacuation q0 = min(D0, S1 + S2)"};
  Property invariance{"invariance of Daganzo/Priority/Partial at interior states"};
  Property reproduce{"Lebacque/SupplyProportional reproduce fluxes at interior states"};
  Property admissible{"stationary and interior admissibility"};
  Property waves{"wave sign admissibility"};
  Property oracle{"brute-force oracle equivalence"};
  Property ctm{"CTM conservation and bounds"};

  constexpr double kEq = 1e-12;
  const int samples = config.props.random_inputs;
  for (int k = 0; k < samples; ++k) {
    const std::array<FundamentalDiagram, 3> fds{random_diagram(rng), random_diagram(rng),
                                                random_diagram(rng)};
    const RiemannInput in = RiemannInput::from_densities(
        fds, {random_density(rng, fds[0]), random_density(rng, fds[1]),
              random_density(rng, fds[2])});
    const ModelSet ms = random_models(rng);
    const double d0 = in.states[0].demand;
    const double s1 = in.states[1].supply;
    const double s2 = in.states[2].supply;
    const std::string where = input_text(in);

    const DivergeModel all[5] = {ms.daganzo, ms.lebacque, ms.proportional, ms.priority,
                                 ms.partial};
    std::array<FluxTriple, 5> q;
    for (int i = 0; i < 5; ++i) {
      const DivergeModel& m = all[i];
      const std::string at = model_text(m) + " " + where;
      q[i] = solver(m, in);
      conservation.record(q[i].q0 == q[i].q1 + q[i].q2, std::abs(q[i].q0 - q[i].q1 - q[i].q2),
                          at);
      const double over = std::max({q[i].q0 - d0, q[i].q1 - s1, q[i].q2 - s2,
                                    -q[i].q1, -q[i].q2});
      bounds.record(over <= kEq, std::max(over, 0.0), at);

      const RiemannSolution sol = solve(m, in);
      bool adm = check_stationary_admissible(sol.stationary_upstream, in.states[0],
                                             Side::Upstream, in.capacity(0)) &&
                 check_interior_admissible(sol.interior_upstream, sol.stationary_upstream,
                                           Side::Upstream, in.capacity(0));
      for (int j = 0; j < 2; ++j) {
        adm = adm &&
              check_stationary_admissible(sol.stationary_downstream[j], in.states[j + 1],
                                          Side::Downstream, in.capacity(j + 1)) &&
              check_interior_admissible(sol.interior_downstream[j], sol.stationary_downstream[j],
                                        Side::Downstream, in.capacity(j + 1));
      }
      admissible.record(adm, 0.0, at);

      try {
        link_waves(sol, in);
        waves.record(true, 0.0, at);
      } catch (const InternalConsistencyError& e) {
        waves.record(false, 0.0, at + " : " + e.what());
      }

      const Split xi_hat = sol.interior_proportions.value_or(m.xi());
      const FluxTriple local =
          local_discrete_flux(m, sol.interior_upstream, sol.interior_downstream, xi_hat);
      const double gap = max_flux_gap(local, q[i]);
      if (m.kind() == ModelKind::Lebacque || m.kind() == ModelKind::SupplyProportional) {
        reproduce.record(gap < kEq, gap, at);
      } else {
        invariance.record(gap < kEq, gap, at);
      }
    }

    for (int i : {0, 1}) {
      const Split& xi = all[i].xi();
      const double gap =
          std::max(std::abs(q[i].q1 - xi[0] * q[i].q0), std::abs(q[i].q2 - xi[1] * q[i].q0));
      fifo.record(gap <= 1e-15, gap, model_text(all[i]) + " " + where);
    }
    {
      const RiemannSolution a = solve(ms.daganzo, in);
      const RiemannSolution b = solve(ms.lebacque, in);
      const double gap = std::max({max_flux_gap(q[0], q[1]),
                                   std::abs(a.stationary_upstream.supply -
                                            b.stationary_upstream.supply),
                                   std::abs(a.stationary_upstream.demand -
                                            b.stationary_upstream.demand),
                                   std::abs(a.stationary_downstream[0].demand -
                                            b.stationary_downstream[0].demand),
                                   std::abs(a.stationary_downstream[1].demand -
                                            b.stationary_downstream[1].demand)});
      dag_leb.record(gap < kEq, gap, model_text(ms.daganzo) + " " + where);
    }
    {
      const double c1 = in.capacity(1);
      const double c2 = in.capacity(2);
      const DivergeModel pri = DivergeModel::priority_based({c1 / (c1 + c2), c2 / (c1 + c2)});
      const double gap = max_flux_gap(q[2], solver(pri, in));
      sp_pri.record(gap < kEq, gap, where);
    }
    {
      const Split& xi = ms.daganzo.xi();
      const FluxTriple p = solver(DivergeModel::partial_evacuation(xi, xi), in);
      const double gap = max_flux_gap(p, q[0]);
      partial_fifo.record(gap < kEq, gap, model_text(ms.daganzo) + " " + where);
      const FluxTriple z = solver(DivergeModel::partial_evacuation({0.0, 0.0}, ms.priority.alpha()), in);
      const double gap2 = max_flux_gap(z, q[3]);
      partial_pri.record(gap2 < kEq, gap2, model_text(ms.priority) + " " + where);
      const double opt_z = std::abs(z.q0 - std::min(d0, s1 + s2));
      optimal.record(opt_z < kEq, opt_z, "partial xi=0 " + where);
    }
    {
      const Split& xi = ms.partial.xi();
      const double under =
          std::max(xi[0] * q[4].q0 - q[4].q1, xi[1] * q[4].q0 - q[4].q2);
      route.record(under <= kEq, std::max(under, 0.0), model_text(ms.partial) + " " + where);
    }
    for (int i : {2, 3}) {
      const double gap = std::abs(q[i].q0 - std::min(d0, s1 + s2));
      optimal.record(gap < kEq, gap, model_text(all[i]) + " " + where);
    }
  }

  // Oracle on a regular grid of UC upstream and OC downstream states.
  {
    const std::array<FundamentalDiagram, 3> fds{FundamentalDiagram::del_castillo_mainline(),
                                                FundamentalDiagram::del_castillo_mainline(),
                                                FundamentalDiagram::del_castillo_ramp()};
    const std::array<double, 3> cap{fds[0].capacity(), fds[1].capacity(), fds[2].capacity()};
    const DivergeModel models[5] = {
        DivergeModel::daganzo_fifo({0.7, 0.3}), DivergeModel::lebacque({0.7, 0.3}),
        DivergeModel::supply_proportional(), DivergeModel::priority_based({0.6, 0.4}),
        DivergeModel::partial_evacuation({0.3, 0.2}, {0.45, 0.55})};
    const int g = config.props.oracle_grid;
    for (const DivergeModel& m : models) {
      for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
          for (int c = 0; c < g; ++c) {
            const double d0 = cap[0] * a / (g - 1);
            const double s1 = cap[1] * b / (g - 1);
            const double s2 = cap[2] * c / (g - 1);
            const RiemannInput in{
                {TrafficState{d0, cap[0]}, TrafficState{cap[1], s1}, TrafficState{cap[2], s2}},
                fds};
            const FluxTriple q = solver(m, in);
            const OracleResult r = brute_force_fluxes(m, d0, s1, s2, cap);
            const double gap = r.found ? max_flux_gap(r.flux, q) : 1.0;
            const bool ok = r.found && r.unique && gap <= 1e-6;
            std::string why = model_text(m) + " " + input_text(in) + " solver (" + num(q.q0) +
                              ", " + num(q.q1) + ", " + num(q.q2) + ")";
            if (!r.found) {
              why += " oracle found no admissible solution";
            } else {
              why += " oracle (" + num(r.flux.q0) + ", " + num(r.flux.q1) + ", " +
                     num(r.flux.q2) + ") spread " + num(r.spread) +
                     (r.budget_exhausted ? " budget exhausted" : "");
            }
            oracle.record(ok, gap, why);
          }
        }
      }
    }
  }

  // Randomized simulations.
  for (int k = 0; k < 24; ++k) {
    const SimConfig sim = random_sim(rng);
    const std::string at = "sim #" + std::to_string(k) + " model " + model_text(sim.model) +
                           " M=" + std::to_string(sim.cells_per_link) +
                           " CFL=" + num(sim.cfl_number());
    try {
      const Trajectory t = run(sim);
      const double before = total_vehicles(t.snapshots.front(), t.dx);
      const double after = total_vehicles(t.final_state, t.dx);
      const double drift = std::abs(after - before - (t.total_inflow - t.total_outflow));
      const double scale = std::max({before, after, t.total_inflow, 1e-3});
      bool props_ok = true;
      for (const auto& xi : t.final_state.proportion) {
        for (double v : xi) props_ok = props_ok && v >= 0.0 && v <= 1.0;
      }
      ctm.record(drift / scale < 1e-8 && props_ok, drift / scale, at);
    } catch (const std::exception& e) {
      ctm.record(false, 1.0, at + " : " + e.what());
    }
  }

  report.note("random inputs " + std::to_string(samples) + ", oracle grid " +
              std::to_string(config.props.oracle_grid) + "^3 per model");
  for (const Property* p : {&conservation, &bounds, &fifo, &dag_leb, &sp_pri, &partial_fifo,
                            &partial_pri, &route, &optimal, &invariance, &reproduce, &admissible,
                            &waves, &oracle, &ctm}) {
    std::string detail = std::to_string(p->checked - p->failed) + "/" +
                         std::to_string(p->checked) + " hold, worst gap " + num(p->worst);
    if (p->failed > 0) detail += "; counterexample: " + p->counterexample;
    report.check(p->failed == 0, p->name, detail);
  }
  write_report(report, out_dir);
  return report;
}

}  // namespace diverge
