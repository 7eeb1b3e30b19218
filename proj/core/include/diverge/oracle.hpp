#pragma once

#include <array>
#include <cstdint>

#include "diverge/diverge_model.hpp"
#include "diverge/riemann_diverge.hpp"

namespace diverge {

struct OracleOptions {
  /// Flux enclosure width below which a box is evaluated at its centre.
  double flux_resolution = 5e-10;
  /// Slack on "q = bound" and margin on "q < bound".
  double binding_slack = 1e-9;
  /// Maximum spread between surviving flux triples still called unique.
  double uniqueness_tolerance = 1e-6;
  std::int64_t box_budget = 20000000;
};

struct OracleResult {
  /// At least one admissible configuration was found.
  bool found = false;
  /// No admissible configuration carries fluxes further than the uniqueness
  /// tolerance from `flux`.
  bool unique = false;
  bool budget_exhausted = false;
  /// Fluxes of the first admissible configuration found.
  FluxTriple flux;
  /// Largest deviation from `flux` among the configurations evaluated.
  double spread = 0.0;
  std::int64_t survivors = 0;
  std::int64_t boxes = 0;
};

/// Search for every Riemann solution of the junction from first principles.
///
/// For each of the eight patterns of which bounds bind (q0 = D0, qi = Si), the
/// stationary states follow, and the admissible interior states form a box:
/// D0(0-) is free in [0, C0] on a UC upstream stationary state and pinned to
/// C0 otherwise; Si(0+) is free in [0, Ci] on an OC downstream stationary
/// state and pinned to Ci otherwise. Lebacque adds the interior proportion
/// xi1(0-) in [0, 1] and the global FIFO constraint. The local flux formula is
/// evaluated with interval bounds, boxes that cannot meet the pattern are
/// discarded, and the rest are bisected until the fluxes are resolved.
///
/// The search runs twice. The first pass stops at any admissible
/// configuration. The second tries to find one whose fluxes differ from it
/// by more than the tolerance, pruning boxes whose fluxes provably cannot.
///
/// The flux formulas here are written out independently of riemann_diverge.
OracleResult brute_force_fluxes(const DivergeModel& model, double demand_up, double supply_1,
                                 double supply_2, const std::array<double, 3>& capacity,
                                 const OracleOptions& options = {});

}  // namespace diverge
