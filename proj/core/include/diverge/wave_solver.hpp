#pragma once

#include <array>
#include <string_view>

#include "diverge/fundamental_diagram.hpp"
#include "diverge/riemann_diverge.hpp"

namespace diverge {

enum class WaveKind { None, Shock, Rarefaction };

std::string_view to_string(WaveKind kind);

inline constexpr double kWaveDensityTolerance = 1e-9;
inline constexpr double kWaveSpeedTolerance = 1e-4;

struct WaveDescription {
  WaveKind kind = WaveKind::None;
  /// Shock: both equal the Rankine-Hugoniot speed. Rarefaction: fan edges
  /// Q'(rho_left), Q'(rho_right), differenced from inside the fan. None: zero.
  double speed_min = 0.0;
  double speed_max = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
};

/// Q'(rho) by central difference with step 1e-6, one-sided at the domain ends.
double wave_speed(const FundamentalDiagram& fd, double rho);

WaveDescription classify_wave(const FundamentalDiagram& fd, double rho_left, double rho_right);

/// Waves on links 0, 1, 2. Throws InternalConsistencyError when an upstream
/// wave travels forward or a downstream wave travels backward.
std::array<WaveDescription, 3> link_waves(const RiemannSolution& solution,
                                          const RiemannInput& input);

}  // namespace diverge
