#pragma once

namespace diverge {

/// Absolute tolerance for flux comparisons (equality with capacity, regime ties).
inline constexpr double kFluxTolerance = 1e-12;
/// Absolute tolerance for density root finding.
inline constexpr double kDensityTolerance = 1e-10;

/// A traffic state in supply-demand space, U = (D, S).
struct TrafficState {
  double demand = 0.0;
  double supply = 0.0;

  friend bool operator==(const TrafficState&, const TrafficState&) = default;
};

}  // namespace diverge
