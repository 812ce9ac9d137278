#pragma once

#include <optional>
#include <string>

namespace ggbm {

/// Parameters of a generalized grey Brownian motion in R^d:
/// 0 < beta <= 1 (mixing), 0 < alpha <= 2 (so Hurst = alpha/2), d >= 1.
struct ModelParams {
  double beta = 1.0;
  double alpha = 1.0;
  int dim = 1;

  double hurst() const { return alpha / 2.0; }

  /// Throws DomainError naming the first violated constraint.
  void validate() const;

  /// True when the Green measure exists: (d*alpha > 2 and 1 < alpha <= 2),
  /// or the Brownian boundary beta = alpha = 1 with d >= 3.
  bool green_exists() const;

  /// The inequality that makes green_exists() false, e.g. "requires alpha > 1".
  std::optional<std::string> green_violation() const;

  bool is_brownian() const { return beta == 1.0 && alpha == 1.0; }
};

}  // namespace ggbm
