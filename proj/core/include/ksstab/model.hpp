#pragma once

#include <string_view>

namespace ksstab {

enum class ModelKind { Flame, Fluid };

enum class ForcingKind { Zero, Manufactured };

/// Coefficients of  y_t + nu2 y_xxxx + nu1 y_xx + nu0 N(y) = f.
///
/// Flame uses N(y) = |y_x|^2 / 2, fluid uses N(y) = y y_x.
struct ModelParams {
  ModelKind kind = ModelKind::Fluid;
  double nu2 = 1e-6;
  double nu1 = 1e-2;
  double nu0 = 1.0;
  ForcingKind forcing = ForcingKind::Zero;

  /// Throws std::invalid_argument unless nu2 > 0 and all coefficients are finite.
  void validate() const;

  static ModelParams fluid_defaults();
  static ModelParams flame_defaults();
};

std::string_view to_string(ModelKind kind);

}  // namespace ksstab
