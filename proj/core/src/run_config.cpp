#include "diverge/run_config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "diverge/errors.hpp"

namespace diverge {
namespace {

void allow_keys(const YAML::Node& node, const std::string& where,
                std::initializer_list<std::string_view> keys) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& where, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for " + where + "." + key);
  }
}

Split get_split(const YAML::Node& node, const std::string& key, const std::string& where,
                Split fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  if (!v.IsSequence() || v.size() != 2) {
    throw ConfigError(where + "." + key + " must be a list of two numbers");
  }
  return {v[0].as<double>(), v[1].as<double>()};
}

FundamentalDiagram parse_diagram(const YAML::Node& node, const std::string& where) {
  allow_keys(node, where,
             {"kind", "free_flow_speed", "jam_density", "shape", "backward_wave_speed"});
  const auto kind = get<std::string>(node, "kind", where, "");
  if (kind == "del_castillo_mainline" || kind == "del_castillo_ramp") {
    const FundamentalDiagram base = kind == "del_castillo_mainline"
                                        ? FundamentalDiagram::del_castillo_mainline()
                                        : FundamentalDiagram::del_castillo_ramp();
    return {base.kind(), get(node, "free_flow_speed", where, base.free_flow_speed()),
            get(node, "jam_density", where, base.jam_density()),
            get(node, "shape", where, base.shape())};
  }
  if (kind == "triangular") {
    return FundamentalDiagram::triangular(get(node, "free_flow_speed", where, 1.0),
                                          get(node, "backward_wave_speed", where, 1.0),
                                          get(node, "jam_density", where, 1.0));
  }
  if (kind == "greenshields") {
    return FundamentalDiagram::greenshields(get(node, "free_flow_speed", where, 1.0),
                                            get(node, "jam_density", where, 1.0));
  }
  throw ConfigError(where + ".kind must name a known diagram, got '" + kind + "'");
}

DivergeModel parse_model(const YAML::Node& node) {
  allow_keys(node, "model", {"kind", "xi", "alpha"});
  const auto name = get<std::string>(node, "kind", "model", "lebacque");
  ModelKind kind;
  try {
    kind = model_kind_from_string(name);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  const Split xi = get_split(node, "xi", "model", {0.7, 0.3});
  const Split alpha = get_split(node, "alpha", "model", {0.5, 0.5});
  switch (kind) {
    case ModelKind::DaganzoFifo: return DivergeModel::daganzo_fifo(xi);
    case ModelKind::Lebacque: return DivergeModel::lebacque(xi);
    case ModelKind::SupplyProportional: return DivergeModel::supply_proportional();
    case ModelKind::PriorityBased: return DivergeModel::priority_based(alpha);
    case ModelKind::PartialEvacuation: return DivergeModel::partial_evacuation(xi, alpha);
  }
  throw ConfigError("unreachable model kind");
}

BoundaryCondition parse_boundary(const YAML::Node& node, const std::string& where) {
  allow_keys(node, where, {"kind", "value", "mean", "amplitude", "period"});
  const auto kind = get<std::string>(node, "kind", where, "neumann");
  if (kind == "neumann") return BoundaryCondition::neumann();
  if (kind == "constant") return BoundaryCondition::constant(get(node, "value", where, 0.0));
  if (kind == "sinusoid") {
    const double period = get(node, "period", where, 1.0);
    if (!(period > 0.0)) throw ConfigError(where + ".period must be positive");
    return BoundaryCondition::sinusoid(get(node, "mean", where, 0.0),
                                       get(node, "amplitude", where, 0.0), period);
  }
  throw ConfigError(where + ".kind must be neumann, constant or sinusoid");
}

std::vector<double> parse_densities(const YAML::Node& node, const std::string& where) {
  if (!node) throw ConfigError(where + " is required");
  if (node.IsSequence()) return node.as<std::vector<double>>();
  return {node.as<double>()};
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML syntax: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.config_hash = fnv1a(yaml_text);
  if (root.IsNull()) return cfg;
  allow_keys(root, "config",
             {"seed", "simulation", "model", "links", "proportions", "boundaries", "verify",
              "converge", "flux_map", "props"});

  try {
    cfg.seed = get<std::uint64_t>(root, "seed", "config", cfg.seed);
    SimConfig& sim = cfg.sim;
    if (const auto s = root["simulation"]) {
      allow_keys(s, "simulation",
                 {"cells_per_link", "time_steps", "link_length", "horizon", "field_interval"});
      sim.cells_per_link = get(s, "cells_per_link", "simulation", sim.cells_per_link);
      sim.time_steps = get(s, "time_steps", "simulation", sim.time_steps);
      sim.link_length = get(s, "link_length", "simulation", sim.link_length);
      sim.horizon = get(s, "horizon", "simulation", sim.horizon);
      sim.field_interval = get(s, "field_interval", "simulation", sim.field_interval);
    }
    if (const auto m = root["model"]) sim.model = parse_model(m);
    if (const auto links = root["links"]) {
      if (!links.IsSequence() || links.size() != 3) {
        throw ConfigError("links must list exactly three links (0, 1, 2)");
      }
      for (std::size_t i = 0; i < 3; ++i) {
        const std::string where = "links[" + std::to_string(i) + "]";
        allow_keys(links[i], where, {"diagram", "initial_density"});
        if (links[i]["diagram"]) {
          sim.diagrams[i] = parse_diagram(links[i]["diagram"], where + ".diagram");
        }
        sim.initial_densities[i] =
            parse_densities(links[i]["initial_density"], where + ".initial_density");
      }
    }
    if (const auto p = root["proportions"]) {
      allow_keys(p, "proportions", {"initial", "inflow"});
      if (p["initial"]) sim.initial_proportions = get_split(p, "initial", "proportions", {});
      if (p["inflow"]) sim.inflow_proportions = get_split(p, "inflow", "proportions", {});
    }
    if (const auto b = root["boundaries"]) {
      allow_keys(b, "boundaries", {"upstream_demand", "downstream_supply"});
      if (b["upstream_demand"]) {
        sim.boundaries.upstream_demand =
            parse_boundary(b["upstream_demand"], "boundaries.upstream_demand");
      }
      if (const auto d = b["downstream_supply"]) {
        if (!d.IsSequence() || d.size() != 2) {
          throw ConfigError("boundaries.downstream_supply must list two boundaries");
        }
        for (std::size_t i = 0; i < 2; ++i) {
          sim.boundaries.downstream_supply[i] = parse_boundary(
              d[i], "boundaries.downstream_supply[" + std::to_string(i) + "]");
        }
      }
    }
    if (const auto v = root["verify"]) {
      allow_keys(v, "verify", {"tolerance", "coarse_cells"});
      cfg.verify.tolerance = get(v, "tolerance", "verify", cfg.verify.tolerance);
      cfg.verify.coarse_cells = get(v, "coarse_cells", "verify", cfg.verify.coarse_cells);
      if (!(cfg.verify.tolerance > 0.0)) throw ConfigError("verify.tolerance must be positive");
    }
    if (const auto c = root["converge"]) {
      allow_keys(c, "converge", {"resolutions", "steps_per_cell", "epsilon_samples", "against"});
      cfg.converge.resolutions =
          get(c, "resolutions", "converge", cfg.converge.resolutions);
      cfg.converge.steps_per_cell =
          get(c, "steps_per_cell", "converge", cfg.converge.steps_per_cell);
      cfg.converge.epsilon_samples =
          get(c, "epsilon_samples", "converge", cfg.converge.epsilon_samples);
      if (const auto a = c["against"]) cfg.converge.against = parse_model(a);
      if (cfg.converge.resolutions.empty()) throw ConfigError("converge.resolutions is empty");
    }
    if (const auto f = root["flux_map"]) {
      allow_keys(f, "flux_map", {"demand", "grid_points"});
      cfg.flux_map.demand = get(f, "demand", "flux_map", cfg.flux_map.demand);
      cfg.flux_map.grid_points = get(f, "grid_points", "flux_map", cfg.flux_map.grid_points);
      if (cfg.flux_map.grid_points < 2) throw ConfigError("flux_map.grid_points must be >= 2");
    }
    if (const auto p = root["props"]) {
      allow_keys(p, "props", {"random_inputs", "oracle_grid"});
      cfg.props.random_inputs = get(p, "random_inputs", "props", cfg.props.random_inputs);
      cfg.props.oracle_grid = get(p, "oracle_grid", "props", cfg.props.oracle_grid);
      if (cfg.props.random_inputs < 1 || cfg.props.oracle_grid < 2) {
        throw ConfigError("props sizes must be positive (oracle_grid >= 2)");
      }
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace diverge
