#include "diverge/fundamental_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diverge/errors.hpp"

namespace diverge {
namespace {

// exp(x) for x above this is treated as +inf when it only multiplies a vanishing term.
constexpr double kExpCutoff = 700.0;

bool is_del_castillo(DiagramKind kind) {
  return kind == DiagramKind::DelCastilloMainline || kind == DiagramKind::DelCastilloRamp;
}

}  // namespace

std::string_view to_string(DiagramKind kind) {
  switch (kind) {
    case DiagramKind::DelCastilloMainline: return "del_castillo_mainline";
    case DiagramKind::DelCastilloRamp: return "del_castillo_ramp";
    case DiagramKind::Triangular: return "triangular";
    case DiagramKind::Greenshields: return "greenshields";
  }
  return "unknown";
}

FundamentalDiagram::FundamentalDiagram(DiagramKind kind, double free_flow_speed,
                                       double jam_density, double shape)
    : kind_(kind), free_flow_speed_(free_flow_speed), jam_density_(jam_density), shape_(shape) {
  if (!(free_flow_speed > 0.0) || !(jam_density > 0.0)) {
    throw ParameterError("fundamental diagram needs positive free-flow speed and jam density");
  }
  if ((is_del_castillo(kind) || kind == DiagramKind::Triangular) && !(shape > 0.0)) {
    throw ParameterError("fundamental diagram shape parameter must be positive");
  }

  // Bisection on the sign of Q'. Q is unimodal, so Q' changes sign once.
  double lo = 0.0;
  double hi = jam_density_;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (flow_derivative(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  critical_density_ = 0.5 * (lo + hi);
  capacity_ = unchecked_flow(critical_density_);
}

FundamentalDiagram FundamentalDiagram::del_castillo_mainline() {
  return {DiagramKind::DelCastilloMainline, 1.0, 2.0, 0.25};
}

FundamentalDiagram FundamentalDiagram::del_castillo_ramp() {
  return {DiagramKind::DelCastilloRamp, 0.5, 1.0, 0.25};
}

FundamentalDiagram FundamentalDiagram::triangular(double free_flow_speed,
                                                  double backward_wave_speed,
                                                  double jam_density) {
  return {DiagramKind::Triangular, free_flow_speed, jam_density, backward_wave_speed};
}

FundamentalDiagram FundamentalDiagram::greenshields(double free_flow_speed, double jam_density) {
  return {DiagramKind::Greenshields, free_flow_speed, jam_density, 0.0};
}

FundamentalDiagram FundamentalDiagram::greenshields_with_capacity(double capacity) {
  return greenshields(4.0 * capacity, 1.0);
}

double FundamentalDiagram::max_wave_speed() const {
  return std::max(std::abs(flow_derivative(0.0)), std::abs(flow_derivative(jam_density_)));
}

void FundamentalDiagram::check_domain(double rho) const {
  if (!(rho >= 0.0) || rho > jam_density_) {
    std::ostringstream msg;
    msg << "density " << rho << " outside [0, " << jam_density_ << "]";
    throw DomainError(msg.str());
  }
}

double FundamentalDiagram::flow(double rho) const {
  check_domain(rho);
  return unchecked_flow(rho);
}

double FundamentalDiagram::unchecked_flow(double rho) const {
  const double v = free_flow_speed_;
  const double rj = jam_density_;
  switch (kind_) {
    case DiagramKind::DelCastilloMainline:
    case DiagramKind::DelCastilloRamp: {
      // Essential singularity at 0; the limit is 0.
      if (rho <= 0.0) return 0.0;
      if (rho >= rj) return 0.0;
      const double inner = shape_ * (rj / rho - 1.0);
      if (inner > kExpCutoff) return v * rho;
      return v * rho * (1.0 - std::exp(1.0 - std::exp(inner)));
    }
    case DiagramKind::Triangular:
      return std::max(0.0, std::min(v * rho, shape_ * (rj - rho)));
    case DiagramKind::Greenshields:
      return v * rho * (1.0 - rho / rj);
  }
  return 0.0;
}

double FundamentalDiagram::flow_derivative(double rho) const {
  const double v = free_flow_speed_;
  const double rj = jam_density_;
  switch (kind_) {
    case DiagramKind::DelCastilloMainline:
    case DiagramKind::DelCastilloRamp: {
      if (rho <= 0.0) return v;
      const double inner = shape_ * (rj / rho - 1.0);
      if (inner > kExpCutoff) return v;
      const double e = std::exp(inner);
      return v * (1.0 - std::exp(1.0 - e) * (1.0 + shape_ * rj * e / rho));
    }
    case DiagramKind::Triangular:
      return v * rho < shape_ * (rj - rho) ? v : -shape_;
    case DiagramKind::Greenshields:
      return v * (1.0 - 2.0 * rho / rj);
  }
  return 0.0;
}

double FundamentalDiagram::demand(double rho) const {
  check_domain(rho);
  return rho <= critical_density_ ? unchecked_flow(rho) : capacity_;
}

double FundamentalDiagram::supply(double rho) const {
  check_domain(rho);
  return rho >= critical_density_ ? unchecked_flow(rho) : capacity_;
}

double FundamentalDiagram::density_from_state(const TrafficState& u) const {
  const bool uc = std::abs(u.supply - capacity_) <= kFluxTolerance;
  const bool oc = std::abs(u.demand - capacity_) <= kFluxTolerance;
  if ((!uc && !oc) || u.demand < -kFluxTolerance || u.supply < -kFluxTolerance) {
    std::ostringstream msg;
    msg << "state (" << u.demand << ", " << u.supply << ") is not on a diagram with capacity "
        << capacity_;
    throw InvalidStateError(msg.str());
  }
  if (uc && oc) return critical_density_;

  // Under-critical: Q increasing on [0, rho_c]; over-critical: decreasing on [rho_c, rho_j].
  const double target = uc ? u.demand : u.supply;
  if (target <= 0.0) return uc ? 0.0 : jam_density_;
  double lo = uc ? 0.0 : critical_density_;
  double hi = uc ? critical_density_ : jam_density_;
  const bool increasing = uc;
  for (int it = 0; it < 200 && hi - lo > 0.01 * kDensityTolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = unchecked_flow(mid) < target;
    if (below == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace diverge
