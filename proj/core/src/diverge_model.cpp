#include "diverge/diverge_model.hpp"

#include <cmath>
#include <string>

#include "diverge/errors.hpp"

namespace diverge {
namespace {

constexpr double kSumTolerance = 1e-12;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DaganzoFifo: return "daganzo_fifo";
    case ModelKind::Lebacque: return "lebacque";
    case ModelKind::SupplyProportional: return "supply_proportional";
    case ModelKind::PriorityBased: return "priority_based";
    case ModelKind::PartialEvacuation: return "partial_evacuation";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (ModelKind k : {ModelKind::DaganzoFifo, ModelKind::Lebacque, ModelKind::SupplyProportional,
                      ModelKind::PriorityBased, ModelKind::PartialEvacuation}) {
    if (to_string(k) == name) return k;
  }
  throw ArgumentError("unknown diverge model '" + std::string(name) + "'");
}

DivergeModel DivergeModel::daganzo_fifo(Split xi) {
  require(xi[0] > 0.0 && xi[1] > 0.0, "FIFO turning proportions must be strictly positive");
  require(std::abs(xi[0] + xi[1] - 1.0) <= kSumTolerance, "FIFO turning proportions must sum to 1");
  return {ModelKind::DaganzoFifo, xi, {0.0, 0.0}};
}

DivergeModel DivergeModel::lebacque(Split xi) {
  DivergeModel m = daganzo_fifo(xi);
  m.kind_ = ModelKind::Lebacque;
  return m;
}

DivergeModel DivergeModel::supply_proportional() {
  return {ModelKind::SupplyProportional, {0.0, 0.0}, {0.0, 0.0}};
}

DivergeModel DivergeModel::priority_based(Split alpha) {
  require(in_unit(alpha[0]) && in_unit(alpha[1]), "priorities must lie in [0, 1]");
  require(std::abs(alpha[0] + alpha[1] - 1.0) <= kSumTolerance, "priorities must sum to 1");
  return {ModelKind::PriorityBased, {0.0, 0.0}, alpha};
}

DivergeModel DivergeModel::partial_evacuation(Split xi, Split alpha) {
  require(in_unit(xi[0]) && in_unit(xi[1]), "partial proportions must lie in [0, 1]");
  require(xi[0] + xi[1] <= 1.0 + kSumTolerance, "partial proportions must sum to at most 1");
  require(std::abs(alpha[0] + alpha[1] - 1.0) <= kSumTolerance, "priorities must sum to 1");
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    require(alpha[i] >= xi[i] - kSumTolerance && alpha[i] <= 1.0 - xi[j] + kSumTolerance,
            "priority alpha_i must lie in [xi_i, 1 - xi_j]");
  }
  return {ModelKind::PartialEvacuation, xi, alpha};
}

}  // namespace diverge
