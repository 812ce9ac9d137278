#include "ggbm/params.hpp"

#include <cmath>

#include "ggbm/errors.hpp"

namespace ggbm {

void ModelParams::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("requires 0 < beta <= 1");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("requires 0 < alpha <= 2");
  if (dim < 1) throw DomainError("requires dim >= 1");
}

std::optional<std::string> ModelParams::green_violation() const {
  try {
    validate();
  } catch (const DomainError& e) {
    return std::string(e.what());
  }
  if (!(dim * alpha > 2.0)) return std::string("requires d*alpha > 2");
  if (is_brownian()) return std::nullopt;
  if (!(alpha > 1.0)) return std::string("requires alpha > 1");
  return std::nullopt;
}

bool ModelParams::green_exists() const { return !green_violation().has_value(); }

}  // namespace ggbm
