#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "diverge/diverge_model.hpp"
#include "diverge/fundamental_diagram.hpp"
#include "diverge/riemann_diverge.hpp"

namespace diverge::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  // Proportion pair summing to one with both entries bounded away from zero.
  Split fifo_split() {
    const double a = uniform(0.05, 0.95);
    return {a, 1.0 - a};
  }

  FundamentalDiagram diagram() {
    switch (pick(4)) {
      case 0: return FundamentalDiagram::del_castillo_mainline();
      case 1: return FundamentalDiagram::del_castillo_ramp();
      case 2: return FundamentalDiagram::greenshields(uniform(0.5, 2.0), uniform(0.5, 3.0));
      default:
        return FundamentalDiagram::triangular(uniform(0.5, 2.0), uniform(0.1, 1.0), uniform(0.5, 3.0));
    }
  }

  // Densities are drawn with some mass exactly at zero, critical and jam.
  double density(const FundamentalDiagram& fd) {
    switch (pick(8)) {
      case 0: return 0.0;
      case 1: return fd.critical_density();
      case 2: return fd.jam_density();
      default: return uniform(0.0, fd.jam_density());
    }
  }

  RiemannInput input() {
    const std::array<FundamentalDiagram, 3> fds{diagram(), diagram(), diagram()};
    return RiemannInput::from_densities(fds, {density(fds[0]), density(fds[1]), density(fds[2])});
  }

  DivergeModel model(ModelKind kind) {
    switch (kind) {
      case ModelKind::DaganzoFifo: return DivergeModel::daganzo_fifo(fifo_split());
      case ModelKind::Lebacque: return DivergeModel::lebacque(fifo_split());
      case ModelKind::SupplyProportional: return DivergeModel::supply_proportional();
      case ModelKind::PriorityBased: {
        const double a = uniform(0.0, 1.0);
        return DivergeModel::priority_based({a, 1.0 - a});
      }
      case ModelKind::PartialEvacuation: {
        const double x1 = uniform(0.0, 0.5);
        const double x2 = uniform(0.0, 0.5);
        const double a = uniform(x1, 1.0 - x2);
        return DivergeModel::partial_evacuation({x1, x2}, {a, 1.0 - a});
      }
    }
    return DivergeModel::supply_proportional();
  }

 private:
  std::mt19937_64 rng_;
};

inline constexpr std::array<ModelKind, 5> kAllModels{
    ModelKind::DaganzoFifo, ModelKind::Lebacque, ModelKind::SupplyProportional,
    ModelKind::PriorityBased, ModelKind::PartialEvacuation};

// Diagrams and initial states of the two-mainline, one-ramp test junction.
inline std::array<FundamentalDiagram, 3> junction_diagrams() {
  return {FundamentalDiagram::del_castillo_mainline(), FundamentalDiagram::del_castillo_mainline(),
          FundamentalDiagram::del_castillo_ramp()};
}

inline RiemannInput reference_input() {
  return RiemannInput::from_densities(junction_diagrams(), {1.0, 1.0, 0.1});
}

}  // namespace diverge::testing
