#include "ggbm/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "ggbm/errors.hpp"
#include "ggbm/quadrature.hpp"
#include "ggbm/specfun.hpp"

namespace ggbm {
namespace {

constexpr std::int64_t kChunk = 64;

double mean_of(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

double sample_variance(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  std::vector<double> sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [mean](double a) { return (a - mean) * (a - mean); });
  return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

}  // namespace

void PerpetualSpec::validate() const {
  if (!(t_max > 0.0)) throw DomainError("perpetual spec: requires t_max > 0");
  if (n_steps < 2) throw DomainError("perpetual spec: requires steps >= 2");
  if (n_paths < 1) throw DomainError("perpetual spec: requires paths >= 1");
  if (threads < 1) throw DomainError("perpetual spec: requires threads >= 1");
  if (!(richardson_fraction >= 0.0 && richardson_fraction <= 1.0))
    throw DomainError("perpetual spec: requires 0 <= richardson_fraction <= 1");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

PerpetualIntegrator::PerpetualIntegrator(const ModelParams& params, const TestFunction& f,
                                         std::span<const double> x, const PerpetualSpec& spec)
    : f_(f),
      x_(x.begin(), x.end()),
      spec_(spec),
      sampler_(params, GridSpec{spec.t_max, spec.n_steps}),
      path_(static_cast<std::size_t>(spec.n_steps + 1) * params.dim),
      values_(spec.n_steps + 1),
      point_(params.dim) {
  if (static_cast<int>(x_.size()) != params.dim) throw DomainError("perpetual integral: x must have d coordinates");
  if (f.dim != params.dim) throw DomainError("perpetual integral: test function dimension mismatch");
}

double PerpetualIntegrator::integrate(RngStream& rng, double* half_grid) {
  sampler_.draw(rng, path_, spec_.representation);
  const int dim = static_cast<int>(x_.size());
  const int n = spec_.n_steps;
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j < dim; ++j) point_[j] = x_[j] + path_[static_cast<std::size_t>(k) * dim + j];
    values_[k] = f_(point_);
  }
  const double h = spec_.t_max / n;
  const double full = h * (pairwise_sum(values_) - 0.5 * (values_[0] + values_[n]));
  if (half_grid) {
    double s = 0.0;
    for (int k = 0; k <= n; k += 2) s += values_[k];
    const int last = n - n % 2;
    // Odd n: the half grid stops one step short; close it with the trapezoid on the final step.
    double coarse = 2.0 * h * (s - 0.5 * (values_[0] + values_[last]));
    if (last != n) coarse += 0.5 * h * (values_[last] + values_[n]);
    *half_grid = coarse;
  }
  return full;
}

double perpetual_integral_one_path(const ModelParams& params, const TestFunction& f, std::span<const double> x,
                                   const PerpetualSpec& spec, RngStream& rng) {
  spec.validate();
  PerpetualIntegrator integrator(params, f, x, spec);
  return integrator.integrate(rng);
}

Estimate estimate_potential_mc(const ModelParams& params, const TestFunction& f, std::span<const double> x,
                               const PerpetualSpec& spec) {
  spec.validate();
  if (auto why = params.green_violation()) throw DomainError("estimate_potential_mc: " + *why);

  const std::int64_t n = spec.n_paths;
  const std::int64_t stride =
      spec.richardson_fraction > 0.0 ? std::max<std::int64_t>(1, std::llround(1.0 / spec.richardson_fraction)) : 0;
  std::vector<double> values(n);
  std::vector<double> diffs(stride > 0 ? (n + stride - 1) / stride : 0);

  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    PerpetualIntegrator integrator(params, f, x, spec);
    while (true) {
      const std::int64_t begin = next.fetch_add(kChunk);
      if (begin >= n) break;
      const std::int64_t end = std::min(n, begin + kChunk);
      for (std::int64_t i = begin; i < end; ++i) {
        RngStream rng(SeedSpec{spec.seed, static_cast<std::uint64_t>(i)});
        if (stride > 0 && i % stride == 0) {
          double coarse = 0.0;
          values[i] = integrator.integrate(rng, &coarse);
          diffs[i / stride] = values[i] - coarse;
        } else {
          values[i] = integrator.integrate(rng);
        }
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(spec.threads, (n + kChunk - 1) / kChunk));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  Estimate est;
  est.n_paths = n;
  est.t_max = spec.t_max;
  est.n_steps = spec.n_steps;
  est.seed = spec.seed;
  est.mean = mean_of(values);
  est.std_error = std::sqrt(sample_variance(values, est.mean) / static_cast<double>(n));
  est.tail_bound = tail_bound(params, f, spec.t_max);

  std::ostringstream note;
  note.precision(6);
  if (diffs.size() >= 2) {
    const double dm = mean_of(diffs);
    const double dse = std::sqrt(sample_variance(diffs, dm) / static_cast<double>(diffs.size()));
    est.discretization_bound = std::abs(dm) + 3.0 * dse;
    note << "grid vs half-grid on " << diffs.size() << " paths: mean difference " << dm << ", standard error "
         << dse << "; bound = |mean| + 3 SE";
  } else {
    note << "not estimated (fewer than two Richardson paths)";
  }
  est.discretization_note = note.str();
  return est;
}

double tail_bound(const ModelParams& params, const TestFunction& f, double t_max) {
  params.validate();
  if (!(t_max > 0.0)) throw DomainError("tail_bound: requires t_max > 0");
  if (auto why = params.green_violation()) throw DomainError("tail_bound: " + *why);
  const int dim = params.dim;
  const double p = 0.5 * dim * params.alpha;
  const double gauss_norm = std::pow(2.0 * std::numbers::pi, -0.5 * dim);

  if (params.beta == 1.0 || 0.5 * dim < 1.0) {
    const double moment = m_wright_moment(params.beta, -0.5 * dim);
    return f.l1_norm * gauss_norm * moment * std::pow(t_max, 1.0 - p) / (p - 1.0);
  }

  // Given Y = tau the time integrand is at most min(A, c t^{-p}).
  const double a = f.sup_norm;
  auto shell = [&](double tau) {
    const double c = f.l1_norm * gauss_norm * std::pow(tau, -0.5 * dim);
    if (a <= 0.0) return c * std::pow(t_max, 1.0 - p) / (p - 1.0);
    const double t_star = std::pow(c / a, 1.0 / p);
    if (t_star <= t_max) return c * std::pow(t_max, 1.0 - p) / (p - 1.0);
    return a * t_star * p / (p - 1.0) - a * t_max;
  };
  const MWright& m = m_wright_instance(params.beta);
  const double limit = m.reliable_limit();
  // shell(tau) ~ tau^{-1/alpha} at 0; tau = u^s with s = alpha/(alpha-1) makes the integrand bounded.
  const double s_exp = params.alpha / (params.alpha - 1.0);
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double tau = std::pow(u, s_exp);
    return shell(tau) * m(std::min(tau, limit)).value * s_exp * std::pow(u, s_exp - 1.0);
  };
  // Breakpoint where the min switches branches: c(tau) = a t_max^p.
  std::vector<double> breaks = {0.0};
  if (a > 0.0) {
    const double tau_switch = std::pow(f.l1_norm * gauss_norm / (a * std::pow(t_max, p)), 2.0 / dim);
    if (tau_switch > 0.0 && tau_switch < limit) breaks.push_back(tau_switch);
  }
  for (double b : {0.5, 1.0, 2.0})
    if (b < limit) breaks.push_back(b);
  breaks.push_back(limit);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  for (double& b : breaks) b = std::pow(b, 1.0 / s_exp);
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-9;
  const quad::Result r = quad::integrate(integrand, breaks, opts);
  // shell() decreases in tau, so the mass beyond the series range adds at most shell(limit) P(Y > limit).
  return r.value + r.abs_error + shell(limit) * m.tail_mass_bound(limit);
}

}  // namespace ggbm
