#include "ggbm/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "ggbm/errors.hpp"

namespace ggbm {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void GridSpec::validate() const {
  if (!(t_max > 0.0)) throw DomainError("grid: requires t_max > 0");
  if (n_steps < 1) throw DomainError("grid: requires n_steps >= 1");
}

double fgn_autocovariance(double hurst, int lag) {
  const double k = std::abs(static_cast<double>(lag));
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(std::abs(k - 1.0), two_h));
}

struct FbmGenerator::Fft {
  explicit Fft(int size) : buffer(size) {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(size, reinterpret_cast<fftw_complex*>(buffer.data()),
                            reinterpret_cast<fftw_complex*>(buffer.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  void run() { fftw_execute(plan); }

  std::vector<std::complex<double>> buffer;
  fftw_plan plan;
};

FbmGenerator::FbmGenerator(double hurst, GridSpec grid, FbmMethod method)
    : hurst_(hurst), grid_(grid), method_(method) {
  if (!(hurst > 0.0 && hurst <= 1.0)) throw DomainError("fbm: requires 0 < hurst <= 1");
  grid.validate();
  if (hurst_ == 1.0) return;  // B(t) = t * xi, no factorization needed

  const int n = grid_.n_steps;
  if (method_ == FbmMethod::Auto)
    method_ = n <= kCholeskyMaxSteps ? FbmMethod::Cholesky : FbmMethod::CirculantEmbedding;

  if (method_ == FbmMethod::CirculantEmbedding) {
    const int m = 2 * n;
    fft_ = std::make_unique<Fft>(m);
    for (int j = 0; j < m; ++j) {
      const int lag = j <= n ? j : m - j;
      fft_->buffer[j] = fgn_autocovariance(hurst_, lag);
    }
    fft_->run();
    double max_eig = 0.0, min_eig = 0.0;
    for (const auto& v : fft_->buffer) {
      max_eig = std::max(max_eig, v.real());
      min_eig = std::min(min_eig, v.real());
    }
    if (min_eig < -1e-10 * max_eig) {
      fft_.reset();
      if (n > kCholeskyFallbackMaxSteps)
        throw SingularMatrixError("fbm: circulant embedding is not nonnegative definite for " +
                                  std::to_string(n) + " steps");
      method_ = FbmMethod::Cholesky;
    } else {
      const double scale = std::pow(grid_.step(), hurst_);
      sqrt_eigen_.resize(m);
      for (int k = 0; k < m; ++k)
        sqrt_eigen_[k] = scale * std::sqrt(std::max(fft_->buffer[k].real(), 0.0) / m);
    }
  }
  if (method_ == FbmMethod::Cholesky) setup_cholesky();
}

FbmGenerator::~FbmGenerator() = default;
FbmGenerator::FbmGenerator(FbmGenerator&&) noexcept = default;
FbmGenerator& FbmGenerator::operator=(FbmGenerator&&) noexcept = default;

void FbmGenerator::setup_cholesky() {
  const int n = grid_.n_steps;
  const double var = std::pow(grid_.step(), 2.0 * hurst_);
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cov(i, j) = var * fgn_autocovariance(hurst_, i - j);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw SingularMatrixError("fbm: fractional Gaussian noise covariance is not positive definite");
  chol_ = llt.matrixL();
}

void FbmGenerator::increments_circulant(RngStream& rng, int dim, std::span<double> out) {
  // Real and imaginary parts of one transform are independent fGn samples,
  // so each FFT serves two coordinates.
  const int n = grid_.n_steps;
  const int m = 2 * n;
  for (int j = 0; j < dim; j += 2) {
    for (int k = 0; k < m; ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      fft_->buffer[k] = {sqrt_eigen_[k] * re, sqrt_eigen_[k] * im};
    }
    fft_->run();
    for (int k = 0; k < n; ++k) {
      out[static_cast<std::size_t>(k + 1) * dim + j] = fft_->buffer[k].real();
      if (j + 1 < dim) out[static_cast<std::size_t>(k + 1) * dim + j + 1] = fft_->buffer[k].imag();
    }
  }
}

void FbmGenerator::increments_cholesky(RngStream& rng, int dim, std::span<double> out) {
  const int n = grid_.n_steps;
  Eigen::VectorXd z(n);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < n; ++k) z[k] = rng.normal();
    const Eigen::VectorXd x = chol_.triangularView<Eigen::Lower>() * z;
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k + 1) * dim + j] = x[k];
  }
}

void FbmGenerator::generate(RngStream& rng, int dim, std::span<double> out) {
  if (dim < 1) throw DomainError("fbm: requires dim >= 1");
  const int points = grid_.n_points();
  if (out.size() != static_cast<std::size_t>(points) * dim)
    throw std::invalid_argument("fbm: output buffer has the wrong size");
  std::fill(out.begin(), out.begin() + dim, 0.0);

  if (hurst_ == 1.0) {
    for (int j = 0; j < dim; ++j) {
      const double xi = rng.normal();
      for (int k = 1; k < points; ++k) out[static_cast<std::size_t>(k) * dim + j] = grid_.time(k) * xi;
    }
    return;
  }
  if (method_ == FbmMethod::CirculantEmbedding)
    increments_circulant(rng, dim, out);
  else
    increments_cholesky(rng, dim, out);
  for (int k = 1; k < points; ++k)
    for (int j = 0; j < dim; ++j)
      out[static_cast<std::size_t>(k) * dim + j] += out[static_cast<std::size_t>(k - 1) * dim + j];
}

Path FbmGenerator::generate(int dim, SeedSpec seed) {
  Path path{grid_, dim, hurst_, seed, std::vector<double>(static_cast<std::size_t>(grid_.n_points()) * dim)};
  RngStream rng(seed);
  generate(rng, dim, path.values);
  return path;
}

Path generate_fbm(double hurst, GridSpec grid, int dim, SeedSpec seed, FbmMethod method) {
  FbmGenerator gen(hurst, grid, method);
  return gen.generate(dim, seed);
}

Path rescale_path(const Path& path, double factor) {
  if (!(factor > 0.0)) throw DomainError("rescale_path: requires factor > 0");
  Path out = path;
  out.grid.t_max = path.grid.t_max * factor;
  if (factor == 1.0) return out;
  const double scale = std::pow(factor, path.hurst);
  for (double& v : out.values) v *= scale;
  return out;
}

}  // namespace ggbm
