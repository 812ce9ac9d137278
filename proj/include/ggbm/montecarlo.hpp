#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ggbm/green.hpp"
#include "ggbm/params.hpp"
#include "ggbm/process.hpp"
#include "ggbm/rng.hpp"

namespace ggbm {

/// Truncated perpetual-integral run: int_0^{t_max} f(x + B(t)) dt by the
/// trapezoid rule on a uniform grid, one path per stream index.
struct PerpetualSpec {
  double t_max = 50.0;
  int n_steps = 2048;
  std::int64_t n_paths = 100000;
  std::uint64_t seed = 0;  // master seed; path i uses stream index i
  int threads = 1;
  Representation representation = Representation::Product;
  /// Every round(1/fraction)-th path is also integrated on the half grid.
  double richardson_fraction = 0.01;

  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  double t_max = 0.0;
  int n_steps = 0;
  std::uint64_t seed = 0;
  /// Bound on E int_{t_max}^inf f(x + B(t)) dt; never folded into mean.
  double tail_bound = 0.0;
  /// Empirical grid-vs-half-grid bound; reported, not proven.
  double discretization_bound = 0.0;
  std::string discretization_note;
};

/// Per-thread integrator holding the path sampler and its buffers.
class PerpetualIntegrator {
 public:
  PerpetualIntegrator(const ModelParams& params, const TestFunction& f, std::span<const double> x,
                      const PerpetualSpec& spec);

  /// Integral along one fresh path drawn from rng. When half_grid is non-null
  /// it receives the same path integrated with every other grid point.
  double integrate(RngStream& rng, double* half_grid = nullptr);

 private:
  const TestFunction& f_;
  std::vector<double> x_;
  PerpetualSpec spec_;
  GgbmSampler sampler_;
  std::vector<double> path_;
  std::vector<double> values_;
  std::vector<double> point_;
};

double perpetual_integral_one_path(const ModelParams& params, const TestFunction& f, std::span<const double> x,
                                   const PerpetualSpec& spec, RngStream& rng);

/// Monte Carlo estimate of the Green potential V(f, x). Throws DomainError if
/// the Green measure does not exist for params. The result depends only on
/// (params, f, x, spec minus threads).
Estimate estimate_potential_mc(const ModelParams& params, const TestFunction& f, std::span<const double> x,
                               const PerpetualSpec& spec);

/// Upper bound on int_{t_max}^inf E|f(x + B(t))| dt, using
/// E|f(x + B(t))| <= min(||f||_inf, ||f||_1 sup_y rho(y, t)) conditionally on
/// Y_beta. Closed form ||f||_1 (2 pi)^{-d/2} E[Y^{-d/2}] t_max^{1-p} / (p-1),
/// p = d alpha / 2, when E[Y^{-d/2}] is finite; otherwise the min-bound is
/// integrated in t exactly and in Y_beta by quadrature. Requires d alpha > 2.
double tail_bound(const ModelParams& params, const TestFunction& f, double t_max);

/// Pairwise (cascade) summation with a fixed split; the result does not
/// depend on how the values were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace ggbm
