#pragma once

#include <memory>

#include "ggbm/params.hpp"

namespace ggbm {

/// Value of a truncated series or quadrature together with a bound on its
/// truncation error.
struct EvalResult {
  double value = 0.0;
  double est_abs_error = 0.0;
  int terms_used = 0;
};

/// Euler gamma function (std::tgamma). Throws DomainError at the poles
/// 0, -1, -2, ...
double gamma_function(double x);

/// Mittag-Leffler function E_beta(z) on the closed negative axis z <= 0,
/// 0 < beta <= 1.
///
/// Small |z| uses the Taylor series with Neumaier-compensated summation. The
/// series is accepted only while the sum of absolute terms E_beta(|z|) stays
/// below kMittagLefflerSeriesGrowth, which bounds cancellation to about
/// 1e-13. Beyond that the spectral representation
///
///   E_beta(-x) = sin(beta pi)/(beta pi) *
///                int_0^1 [exp(-(x u)^{1/beta}) + exp(-(x/u)^{1/beta})]
///                        / (u^2 + 2 u cos(beta pi) + 1) du
///
/// is integrated adaptively. beta = 1 returns exp(z).
EvalResult mittag_leffler(double beta, double z);

inline constexpr double kMittagLefflerSeriesGrowth = 1e3;

/// M-Wright density M_beta on [0, T_beta] for 0 < beta < 1.
///
/// Series (1/pi) sum_n (-tau)^n / n! Gamma(beta(n+1)) sin(pi beta (n+1)),
/// i.e. the Wright-function series with 1/Gamma(1-beta(n+1)) rewritten by
/// reflection. Coefficients are built once in quad precision and evaluated
/// in double-double, so the cancellation of the alternating series is
/// harmless up to T_beta, the point where the absolute series reaches
/// kMWrightSeriesGrowth. Past T_beta evaluation throws ConvergenceError; at
/// T_beta the density itself is of order 1/kMWrightSeriesGrowth.
///
/// Construction costs a few hundred quad-precision lgamma calls; keep one
/// instance per beta in hot loops. Instances are immutable and shareable
/// across threads.
class MWright {
 public:
  explicit MWright(double beta);

  double beta() const { return beta_; }
  double reliable_limit() const { return limit_; }
  EvalResult operator()(double tau) const;

  /// Bound on the mass of M_beta beyond `tau`, from Markov's inequality over
  /// the integer moments.
  double tail_mass_bound(double tau) const;

 private:
  struct Series;
  double beta_;
  double limit_;
  std::shared_ptr<const Series> series_;
};

inline constexpr double kMWrightSeriesGrowth = 1e15;
/// Above this beta the series needs too many terms; MWright throws DomainError.
inline constexpr double kMWrightMaxBeta = 0.95;

/// Convenience wrapper around a per-thread cached MWright.
EvalResult m_wright(double beta, double tau);

/// The per-thread cached instance behind m_wright(). The reference stays
/// valid until the same thread asks for a different beta.
const MWright& m_wright_instance(double beta);

/// Generalized moment int_0^inf tau^delta M_beta(tau) dtau
/// = Gamma(delta+1) / Gamma(beta delta + 1). For beta = 1 (point mass at 1)
/// every moment is 1. Throws DomainError when delta <= -1 and beta < 1,
/// where the integral diverges because M_beta(0) = 1/Gamma(1-beta) > 0.
double m_wright_moment(double beta, double delta);

/// C(alpha, d) = (1/alpha) 2^{-1/alpha} pi^{-d/2} Gamma(d/2 - 1/alpha), the
/// constant of int_0^inf (2 pi t^alpha tau)^{-d/2} exp(-r^2/(2 t^alpha tau)) dt
/// = C tau^{-1/alpha} r^{2/alpha - d}. Requires 0 < alpha <= 2, d alpha > 2.
double time_kernel_constant(double alpha, int dim);

/// Green constant D(beta, alpha, d) = C(alpha, d) * m_wright_moment(beta, -1/alpha).
/// Requires params.green_exists(). At the Brownian point beta = alpha = 1
/// the moment is that of the point mass, so D = C(1, d) = Gamma(d/2-1)/(2 pi^{d/2}).
double green_constant(const ModelParams& params);

}  // namespace ggbm
