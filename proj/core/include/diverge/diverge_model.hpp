#pragma once

#include <array>
#include <string_view>

namespace diverge {

enum class ModelKind {
  DaganzoFifo,
  Lebacque,
  SupplyProportional,
  PriorityBased,
  PartialEvacuation,
};

std::string_view to_string(ModelKind kind);
/// Parses the snake_case names produced by to_string. Throws ArgumentError.
ModelKind model_kind_from_string(std::string_view name);

using Split = std::array<double, 2>;

/// Junction entropy condition plus its parameters. Construct through the
/// named factories; each validates its parameter constraints.
class DivergeModel {
 public:
  static DivergeModel daganzo_fifo(Split xi);
  static DivergeModel lebacque(Split xi);
  static DivergeModel supply_proportional();
  static DivergeModel priority_based(Split alpha);
  static DivergeModel partial_evacuation(Split xi, Split alpha);

  [[nodiscard]] ModelKind kind() const { return kind_; }
  /// Predefined turning proportions; zero for the pure evacuation models.
  [[nodiscard]] const Split& xi() const { return xi_; }
  /// Priority weights; zero for models that do not use them.
  [[nodiscard]] const Split& alpha() const { return alpha_; }

  /// DaganzoFifo and Lebacque: every vehicle has a predefined route.
  [[nodiscard]] bool is_fifo_family() const {
    return kind_ == ModelKind::DaganzoFifo || kind_ == ModelKind::Lebacque;
  }

 private:
  DivergeModel(ModelKind kind, Split xi, Split alpha) : kind_(kind), xi_(xi), alpha_(alpha) {}

  ModelKind kind_;
  Split xi_{};
  Split alpha_{};
};

}  // namespace diverge
