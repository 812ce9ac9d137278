#include "ggbm/process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ggbm/errors.hpp"
#include "ggbm/quadrature.hpp"
#include "ggbm/randvar.hpp"
#include "ggbm/specfun.hpp"

namespace ggbm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_times(std::span<const double> times) {
  if (times.empty()) throw DomainError("fdd: requires at least one time point");
  if (static_cast<int>(times.size()) > kMaxFddPoints)
    throw DomainError("fdd: requires n <= " + std::to_string(kMaxFddPoints));
  if (!(times[0] > 0.0)) throw DomainError("fdd: requires t_1 > 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("fdd: requires strictly increasing times");
}

void check_theta(const ModelParams& params, std::span<const double> times, const Eigen::MatrixXd& theta) {
  if (theta.rows() != static_cast<Eigen::Index>(times.size()) || theta.cols() != params.dim)
    throw DomainError("fdd: theta must have n rows and d columns");
}

// Sum over coordinates of theta_j^T A theta_j.
double quadratic_form_sum(const Eigen::MatrixXd& a_times_theta, const Eigen::MatrixXd& theta) {
  return (theta.array() * a_times_theta.array()).sum();
}

}  // namespace

Eigen::MatrixXd gamma_alpha_matrix(double alpha, std::span<const double> times) {
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j)
      g(k, j) = std::pow(times[k], alpha) + std::pow(times[j], alpha) -
                std::pow(std::abs(times[k] - times[j]), alpha);
  return g;
}

// ---------------------------------------------------------------------------

GgbmSampler::GgbmSampler(const ModelParams& params, GridSpec grid, FbmMethod method)
    : params_(params), fbm_((params.validate(), params.hurst()), grid, method) {}

double GgbmSampler::draw(RngStream& rng, std::span<double> out, Representation rep) {
  const double y = sample_y_beta(params_.beta, rng).value;
  fbm_.generate(rng, params_.dim, out);
  if (y == 1.0) return y;
  const double scale = rep == Representation::Product
                           ? std::sqrt(y)
                           : std::pow(std::pow(y, 1.0 / params_.alpha), params_.hurst());
  for (double& v : out) v *= scale;
  return y;
}

Path GgbmSampler::draw(SeedSpec seed, Representation rep) {
  const GridSpec& g = grid();
  Path path{g, params_.dim, params_.hurst(), seed,
            std::vector<double>(static_cast<std::size_t>(g.n_points()) * params_.dim)};
  RngStream rng(seed);
  draw(rng, path.values, rep);
  return path;
}

Path ggbm_path_product(const ModelParams& params, GridSpec grid, SeedSpec seed) {
  GgbmSampler sampler(params, grid);
  return sampler.draw(seed, Representation::Product);
}

Path ggbm_path_subordinated(const ModelParams& params, GridSpec grid, SeedSpec seed) {
  params.validate();
  RngStream rng(seed);
  const double y = sample_y_beta(params.beta, rng).value;
  FbmGenerator fbm(params.hurst(), grid);
  Path base{grid, params.dim, params.hurst(), seed,
            std::vector<double>(static_cast<std::size_t>(grid.n_points()) * params.dim)};
  fbm.generate(rng, params.dim, base.values);
  // B(t_k * c) for c = Y^{1/alpha}, reported at the original times t_k.
  Path out = rescale_path(base, std::pow(y, 1.0 / params.alpha));
  out.grid = grid;
  return out;
}

// ---------------------------------------------------------------------------

double gaussian_mixture_integral(double beta, double p, double q) {
  if (!(q >= 0.0)) throw DomainError("mixture integral: requires q >= 0");
  if (beta == 1.0) return std::exp(-0.5 * q);
  if (q == 0.0 && p >= 1.0)
    throw DomainError("density is unbounded at the origin for beta < 1 and n*d >= 2");

  const MWright& m = m_wright_instance(beta);
  const double limit = m.reliable_limit();
  // The part beyond T is at most T^{-p} times the tail mass of M_beta; asking
  // the quadrature for more than that chases noise when q / (2 p) >> T.
  const double truncation = std::pow(limit, -p) * m.tail_mass_bound(limit);
  quad::Options opts;
  opts.abs_tol = std::max(truncation, 1e-300);
  opts.rel_tol = 1e-11;
  opts.max_intervals = 3000;

  std::vector<double> tau_breaks = {0.0};
  const double peak = q > 0.0 ? q / (2.0 * p) : 0.0;
  for (double b : {0.5, 1.0, 2.0, peak * 0.25, peak, peak * 4.0, peak * 16.0})
    if (b > 0.0 && b < limit) tau_breaks.push_back(b);
  tau_breaks.push_back(limit);
  std::sort(tau_breaks.begin(), tau_breaks.end());
  tau_breaks.erase(std::unique(tau_breaks.begin(), tau_breaks.end()), tau_breaks.end());

  quad::Result r;
  if (p < 1.0) {
    // tau = u^{1/(1-p)} absorbs tau^{-p}: tau^{-p} dtau = du / (1-p).
    const double e = 1.0 / (1.0 - p);
    auto f = [&](double u) {
      const double tau = std::pow(u, e);
      if (tau <= 0.0) return q > 0.0 ? 0.0 : m(0.0).value * e;
      return std::exp(-0.5 * q / tau) * m(std::min(tau, limit)).value * e;
    };
    std::vector<double> u_breaks;
    for (double b : tau_breaks) u_breaks.push_back(std::pow(b, 1.0 - p));
    r = quad::integrate(f, u_breaks, opts);
  } else {
    auto f = [&](double tau) {
      if (tau <= 0.0) return 0.0;
      return std::exp(-p * std::log(tau) - 0.5 * q / tau) * m(std::min(tau, limit)).value;
    };
    r = quad::integrate(f, tau_breaks, opts);
  }
  if (!r.converged && r.abs_error > std::max(1e-9 * std::abs(r.value), 10.0 * opts.abs_tol))
    throw ConvergenceError("mixture integral did not converge (p = " + std::to_string(p) +
                           ", q = " + std::to_string(q) + ")");
  return r.value;
}

double marginal_density(const ModelParams& params, std::span<const double> y, double t) {
  params.validate();
  if (!(t > 0.0)) throw DomainError("marginal_density: requires t > 0");
  if (static_cast<int>(y.size()) != params.dim)
    throw DomainError("marginal_density: y must have d coordinates");
  double r2 = 0.0;
  for (double v : y) r2 += v * v;
  const double scale = std::pow(t, params.alpha);
  const double d = params.dim;
  return std::pow(kTwoPi * scale, -0.5 * d) * gaussian_mixture_integral(params.beta, 0.5 * d, r2 / scale);
}

double fdd_density(const ModelParams& params, std::span<const double> times, const Eigen::MatrixXd& theta) {
  params.validate();
  check_times(times);
  check_theta(params, times, theta);
  const Eigen::MatrixXd cov = 0.5 * gamma_alpha_matrix(params.alpha, times);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const Eigen::VectorXd diag = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(diag.minCoeff() > 1e-14 * diag.maxCoeff()))
    throw SingularMatrixError("fdd_density: gamma_alpha matrix is singular");
  const double log_det = diag.array().log().sum();
  const double q = quadratic_form_sum(ldlt.solve(theta), theta);
  const double n = static_cast<double>(times.size());
  const double d = params.dim;
  const double log_pref = -0.5 * n * d * std::log(kTwoPi) - 0.5 * d * log_det;
  return std::exp(log_pref) * gaussian_mixture_integral(params.beta, 0.5 * n * d, q);
}

double fdd_charfun(const ModelParams& params, std::span<const double> times, const Eigen::MatrixXd& theta) {
  params.validate();
  check_times(times);
  check_theta(params, times, theta);
  const Eigen::MatrixXd cov = 0.5 * gamma_alpha_matrix(params.alpha, times);
  const double q = quadratic_form_sum(cov * theta, theta);
  return mittag_leffler(params.beta, -0.5 * q).value;
}

}  // namespace ggbm
