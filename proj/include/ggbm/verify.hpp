#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggbm/params.hpp"

namespace ggbm {

/// One verified identity: what was expected, what was observed and the
/// tolerance the comparison used.
struct Check {
  std::string name;
  std::string anchor;  // the property or identity being checked
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();

  bool pass() const;
  nlohmann::json to_json() const;
};

struct VerifyConfig {
  /// When empty the suite uses its own parameter sets.
  std::optional<ModelParams> params;
  std::int64_t paths = 100000;
  std::uint64_t seed = 42;
  int threads = 1;
  double t_max = 50.0;
  int steps = 2048;
};

/// Suite names accepted by run_suite().
const std::vector<std::string>& suite_names();

/// Deterministic checks: Laplace-transform and moment identities of M_beta,
/// Mittag-Leffler monotonicity, the Gaussian case of M_{1/2}, the time-kernel
/// closed form and the Green constant.
Report verify_specfun(const VerifyConfig& cfg);
/// Monte Carlo moments of B(t) for d = 1 (odd moments vanish, even ones
/// follow (2n)! t^{alpha n} / (2^n Gamma(beta n + 1))) and the Y_beta law.
Report verify_moments(const VerifyConfig& cfg);
/// Monte Carlo E[(B(t), B(s))] = d (t^alpha + s^alpha - |t-s|^alpha) / (2 Gamma(beta+1)).
Report verify_covariance(const VerifyConfig& cfg);
/// Monte Carlo increment characteristic function against E_beta(-k^2 |t-s|^alpha / 2).
Report verify_charfun(const VerifyConfig& cfg);
/// KS tests: product vs subordinated marginals and self-similarity.
Report verify_representation(const VerifyConfig& cfg);
/// Monte Carlo perpetual integral vs the analytic Green potential, plus the
/// continuity bound over a Gaussian family.
Report verify_green(const VerifyConfig& cfg);

/// Dispatch by name; throws std::invalid_argument for unknown suites.
Report run_suite(const std::string& name, const VerifyConfig& cfg);

}  // namespace ggbm
