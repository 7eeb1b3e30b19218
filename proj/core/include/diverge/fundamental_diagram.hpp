#pragma once

#include <string_view>

#include "diverge/traffic_state.hpp"

namespace diverge {

enum class DiagramKind {
  DelCastilloMainline,
  DelCastilloRamp,
  Triangular,
  Greenshields,
};

std::string_view to_string(DiagramKind kind);

/// Unimodal flow-density relation Q(rho) on [0, jam_density].
///
/// Del Castillo diagrams use the normalized maximum-sensitivity form
///   Q(rho) = v rho {1 - exp[1 - exp(k (rho_j / rho - 1))]}
/// where `shape` holds k. Triangular diagrams use `shape` as the backward
/// wave speed w, Q = min(v rho, w (rho_j - rho)). Greenshields ignores `shape`.
///
/// The critical density and capacity are located numerically at construction
/// and cached; the object is immutable afterwards.
class FundamentalDiagram {
 public:
  FundamentalDiagram(DiagramKind kind, double free_flow_speed, double jam_density,
                     double shape);

  /// Two-lane mainline: v = 1, rho_j = 2, k = 1/4.
  static FundamentalDiagram del_castillo_mainline();
  /// One-lane off-ramp: v = 1/2, rho_j = 1, k = 1/4.
  static FundamentalDiagram del_castillo_ramp();
  static FundamentalDiagram triangular(double free_flow_speed, double backward_wave_speed,
                                       double jam_density);
  static FundamentalDiagram greenshields(double free_flow_speed, double jam_density);
  /// Greenshields diagram with jam density 1 scaled to the requested capacity.
  static FundamentalDiagram greenshields_with_capacity(double capacity);

  [[nodiscard]] DiagramKind kind() const { return kind_; }
  [[nodiscard]] double free_flow_speed() const { return free_flow_speed_; }
  [[nodiscard]] double jam_density() const { return jam_density_; }
  [[nodiscard]] double shape() const { return shape_; }
  [[nodiscard]] double capacity() const { return capacity_; }
  [[nodiscard]] double critical_density() const { return critical_density_; }

  /// Largest characteristic speed magnitude, max(|Q'(0)|, |Q'(rho_j)|).
  [[nodiscard]] double max_wave_speed() const;

  /// Q(rho). Throws DomainError outside [0, jam_density].
  [[nodiscard]] double flow(double rho) const;
  /// Closed-form Q'(rho); one-sided at the triangular kink.
  [[nodiscard]] double flow_derivative(double rho) const;
  /// D(rho) = Q(min(rho, rho_c)).
  [[nodiscard]] double demand(double rho) const;
  /// S(rho) = Q(max(rho, rho_c)).
  [[nodiscard]] double supply(double rho) const;

  /// Inverse of the supply-demand map: the unique density whose (D, S) is `u`.
  /// Throws InvalidStateError if max(D, S) differs from capacity.
  [[nodiscard]] double density_from_state(const TrafficState& u) const;

 private:
  void check_domain(double rho) const;
  [[nodiscard]] double unchecked_flow(double rho) const;

  DiagramKind kind_;
  double free_flow_speed_;
  double jam_density_;
  double shape_;
  double critical_density_ = 0.0;
  double capacity_ = 0.0;
};

/// Free-function spellings used throughout the solver code.
inline double flow(const FundamentalDiagram& fd, double rho) { return fd.flow(rho); }
inline double critical_density(const FundamentalDiagram& fd) { return fd.critical_density(); }
inline double demand(const FundamentalDiagram& fd, double rho) { return fd.demand(rho); }
inline double supply(const FundamentalDiagram& fd, double rho) { return fd.supply(rho); }
inline double density_from_state(const FundamentalDiagram& fd, const TrafficState& u) {
  return fd.density_from_state(u);
}

}  // namespace diverge
