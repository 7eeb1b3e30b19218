#include "diverge/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diverge/errors.hpp"

namespace diverge {
namespace {

constexpr double kDifferenceStep = 1e-6;

}  // namespace

std::string_view to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::None: return "none";
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
  }
  return "unknown";
}

double wave_speed(const FundamentalDiagram& fd, double rho) {
  const double lo = std::max(0.0, rho - kDifferenceStep);
  const double hi = std::min(fd.jam_density(), rho + kDifferenceStep);
  return (fd.flow(hi) - fd.flow(lo)) / (hi - lo);
}

WaveDescription classify_wave(const FundamentalDiagram& fd, double rho_left, double rho_right) {
  const double q_left = fd.flow(rho_left);
  const double q_right = fd.flow(rho_right);
  WaveDescription w;
  w.rho_left = rho_left;
  w.rho_right = rho_right;
  if (std::abs(rho_left - rho_right) < kWaveDensityTolerance) return w;
  if (rho_left < rho_right) {
    w.kind = WaveKind::Shock;
    w.speed_min = w.speed_max = (q_left - q_right) / (rho_left - rho_right);
  } else {
    w.kind = WaveKind::Rarefaction;
    // One-sided differences taken inside the fan so a kink at either edge
    // (triangular diagrams) does not leak the other branch's slope.
    const double h = std::min(kDifferenceStep, rho_left - rho_right);
    w.speed_min = (q_left - fd.flow(rho_left - h)) / h;
    w.speed_max = (fd.flow(rho_right + h) - q_right) / h;
  }
  return w;
}

std::array<WaveDescription, 3> link_waves(const RiemannSolution& solution,
                                          const RiemannInput& input) {
  std::array<WaveDescription, 3> waves;
  const auto& fd = input.diagrams;
  waves[0] = classify_wave(fd[0], fd[0].density_from_state(input.states[0]),
                           fd[0].density_from_state(solution.stationary_upstream));
  for (int i = 1; i <= 2; ++i) {
    waves[i] = classify_wave(fd[i], fd[i].density_from_state(solution.stationary_downstream[i - 1]),
                             fd[i].density_from_state(input.states[i]));
  }
  for (int i = 0; i < 3; ++i) {
    const WaveDescription& w = waves[i];
    if (w.kind == WaveKind::None) continue;
    const bool bad = i == 0 ? std::max(w.speed_min, w.speed_max) > kWaveSpeedTolerance
                            : std::min(w.speed_min, w.speed_max) < -kWaveSpeedTolerance;
    if (bad) {
      std::ostringstream msg;
      msg << to_string(w.kind) << " on link " << i << " has speeds [" << w.speed_min << ", "
          << w.speed_max << "] of the wrong sign";
      throw InternalConsistencyError(msg.str());
    }
  }
  return waves;
}

}  // namespace diverge
