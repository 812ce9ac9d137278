#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ggbm/rng.hpp"

namespace ggbm {

/// Uniform grid t_k = k * t_max / n_steps, k = 0..n_steps.
struct GridSpec {
  double t_max = 1.0;
  int n_steps = 1;

  double step() const { return t_max / n_steps; }
  double time(int k) const { return t_max * k / n_steps; }
  int n_points() const { return n_steps + 1; }
  void validate() const;
};

/// A d-dimensional sample path on a GridSpec. values holds n_points() rows of
/// dim coordinates, row-major; row 0 is the origin.
struct Path {
  GridSpec grid;
  int dim = 1;
  double hurst = 0.5;
  SeedSpec seed;
  std::vector<double> values;

  double at(int k, int j) const { return values[static_cast<std::size_t>(k) * dim + j]; }
  double& at(int k, int j) { return values[static_cast<std::size_t>(k) * dim + j]; }
  std::span<const double> point(int k) const {
    return {values.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }
};

enum class FbmMethod {
  Auto,                // Cholesky for n_steps <= kCholeskyMaxSteps, else circulant embedding
  CirculantEmbedding,  // exact, O(n log n); falls back to Cholesky if the embedding is indefinite
  Cholesky,            // exact, O(n^3) setup; reference method
};

inline constexpr int kCholeskyMaxSteps = 16;
/// Largest grid on which the Cholesky fallback is attempted.
inline constexpr int kCholeskyFallbackMaxSteps = 4096;

/// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, int lag);

/// Reusable generator of fBm paths with a fixed Hurst index and grid. Setup
/// (eigenvalues or Cholesky factor, FFT plan) happens once; generate() is then
/// cheap. A generator owns scratch buffers, so use one per thread.
class FbmGenerator {
 public:
  FbmGenerator(double hurst, GridSpec grid, FbmMethod method = FbmMethod::Auto);
  ~FbmGenerator();
  FbmGenerator(FbmGenerator&&) noexcept;
  FbmGenerator& operator=(FbmGenerator&&) noexcept;

  double hurst() const { return hurst_; }
  const GridSpec& grid() const { return grid_; }
  /// Method actually in use after any fallback.
  FbmMethod method() const { return method_; }

  /// Fills out (size n_points * dim, row-major) with a path drawn from rng.
  void generate(RngStream& rng, int dim, std::span<double> out);
  Path generate(int dim, SeedSpec seed);

 private:
  struct Fft;
  void setup_cholesky();
  void increments_circulant(RngStream& rng, int dim, std::span<double> out);
  void increments_cholesky(RngStream& rng, int dim, std::span<double> out);

  double hurst_;
  GridSpec grid_;
  FbmMethod method_;
  std::vector<double> sqrt_eigen_;  // circulant: sqrt(lambda_k / M) * h^H
  Eigen::MatrixXd chol_;            // Cholesky factor of the fGn covariance
  std::unique_ptr<Fft> fft_;
};

/// One d-dimensional fBm path with independent components.
Path generate_fbm(double hurst, GridSpec grid, int dim, SeedSpec seed,
                  FbmMethod method = FbmMethod::Auto);

/// Self-similarity B_H(c t) = c^H B_H(t) in law: returns the path on the grid
/// scaled by `factor` with values multiplied by factor^H.
Path rescale_path(const Path& path, double factor);

}  // namespace ggbm
