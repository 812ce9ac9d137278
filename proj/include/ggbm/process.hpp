#pragma once

#include <span>

#include <Eigen/Dense>

#include "ggbm/fbm.hpp"
#include "ggbm/params.hpp"
#include "ggbm/rng.hpp"

namespace ggbm {

/// Largest number of time points accepted by the dense fdd evaluations.
inline constexpr int kMaxFddPoints = 8;

/// The matrix (t_k^alpha + t_j^alpha - |t_k - t_j|^alpha)_{k,j}.
Eigen::MatrixXd gamma_alpha_matrix(double alpha, std::span<const double> times);

enum class Representation {
  Product,       // sqrt(Y_beta) * B^{alpha/2}(t)
  Subordinated,  // B^{alpha/2}(t * Y_beta^{1/alpha})
};

/// Repeated ggBm path sampling on a fixed grid. Each draw takes Y_beta first
/// and then the fBm from the same stream. One sampler per thread.
class GgbmSampler {
 public:
  GgbmSampler(const ModelParams& params, GridSpec grid, FbmMethod method = FbmMethod::Auto);

  const ModelParams& params() const { return params_; }
  const GridSpec& grid() const { return fbm_.grid(); }

  /// Fills out (n_points * dim, row-major) and returns the Y_beta used.
  double draw(RngStream& rng, std::span<double> out, Representation rep = Representation::Product);
  Path draw(SeedSpec seed, Representation rep = Representation::Product);

 private:
  ModelParams params_;
  FbmGenerator fbm_;
};

/// sqrt(Y_beta) times an independent fBm with Hurst alpha/2.
Path ggbm_path_product(const ModelParams& params, GridSpec grid, SeedSpec seed);

/// fBm evaluated on the time-changed grid t * Y_beta^{1/alpha}, obtained with
/// rescale_path and relabelled onto the original grid.
Path ggbm_path_subordinated(const ModelParams& params, GridSpec grid, SeedSpec seed);

/// Density of B(t) at y:
///   (2 pi t^alpha)^{-d/2} int_0^inf tau^{-d/2} exp(-|y|^2 / (2 t^alpha tau)) M_beta(tau) dtau.
/// For beta < 1 and d >= 2 the density is unbounded at y = 0 and that point
/// throws DomainError.
double marginal_density(const ModelParams& params, std::span<const double> y, double t);

/// Joint density of (B(t_1), ..., B(t_n)) at theta (n rows, d columns).
///
/// The Gaussian kernel uses the fBm covariance gamma_alpha / 2, i.e. the
/// normalization under which n = 1 reproduces marginal_density and the
/// increment characteristic function E_beta(-|k|^2 |t-s|^alpha / 2).
double fdd_density(const ModelParams& params, std::span<const double> times,
                   const Eigen::MatrixXd& theta);

/// Characteristic function E[exp(i sum_k (theta_k, B(t_k)))]
/// = E_beta(-(1/2) sum_j theta_{.,j}^T (gamma_alpha / 2) theta_{.,j}).
double fdd_charfun(const ModelParams& params, std::span<const double> times,
                   const Eigen::MatrixXd& theta);

/// int_0^inf tau^{-p} exp(-q / (2 tau)) M_beta(tau) dtau, the scalar mixing
/// integral behind the densities. beta = 1 gives exp(-q/2). Throws
/// DomainError when q = 0 and p >= 1 (divergent).
double gaussian_mixture_integral(double beta, double p, double q);

}  // namespace ggbm
