#pragma once

#include "ggbm/rng.hpp"

namespace ggbm {

/// A draw of the mixing variable Y_beta, whose density is M_beta.
struct YBetaSample {
  double value = 1.0;
  double beta = 1.0;
};

/// Positive beta-stable variable with E[exp(-s S)] = exp(-s^beta),
/// 0 < beta < 1, by Kanter's representation
///   S = (A(U) / E)^{(1-beta)/beta},
///   A(u) = sin(beta u)^{beta/(1-beta)} sin((1-beta) u) / sin(u)^{1/(1-beta)},
/// with U uniform on (0, pi) and E standard exponential.
double sample_one_sided_stable(double beta, RngStream& rng);

/// Y_beta = S^{-beta}, so that E[exp(-s Y_beta)] = E_beta(-s). beta = 1 gives
/// the point mass Y = 1 without consuming randomness.
YBetaSample sample_y_beta(double beta, RngStream& rng);

}  // namespace ggbm
