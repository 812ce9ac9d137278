#include "ggbm/randvar.hpp"

#include <cmath>
#include <numbers>

#include "ggbm/errors.hpp"

namespace ggbm {
namespace {

// log A(u) of Kanter's representation.
double log_kanter_a(double beta, double u) {
  const double one_minus = 1.0 - beta;
  return (beta / one_minus) * std::log(std::sin(beta * u)) + std::log(std::sin(one_minus * u)) -
         std::log(std::sin(u)) / one_minus;
}

}  // namespace

double sample_one_sided_stable(double beta, RngStream& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("sample_one_sided_stable: requires 0 < beta < 1");
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  return std::exp((1.0 - beta) / beta * (log_kanter_a(beta, u) - std::log(e)));
}

YBetaSample sample_y_beta(double beta, RngStream& rng) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("sample_y_beta: requires 0 < beta <= 1");
  if (beta == 1.0) return {1.0, 1.0};
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  // S^{-beta} = (E / A)^{1-beta}, formed directly in the log domain.
  return {std::exp((1.0 - beta) * (std::log(e) - log_kanter_a(beta, u))), beta};
}

}  // namespace ggbm
