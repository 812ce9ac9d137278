#include "ggbm/specfun.hpp"

#include <quadmath.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ggbm/errors.hpp"
#include "ggbm/quadrature.hpp"

namespace ggbm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Double-double helpers for the M-Wright series.

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD mul(DD a, DD b) {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p, e);
}

inline DD mul(DD a, double b) {
  const double p = a.hi * b;
  double e = std::fma(a.hi, b, -p);
  e += a.lo * b;
  return quick_two_sum(p, e);
}

}  // namespace

double gamma_function(double x) {
  if (std::isnan(x)) return x;
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("gamma: pole at nonpositive integer " + std::to_string(x));
  return std::tgamma(x);
}

// ---------------------------------------------------------------------------
// Mittag-Leffler

namespace {

EvalResult mittag_leffler_integral(double beta, double x) {
  const double c = std::cos(beta * kPi);
  const double prefactor = std::sin(beta * kPi) / (beta * kPi);
  const double inv_beta = 1.0 / beta;
  auto integrand = [&](double u) {
    const double denom = u * u + 2.0 * u * c + 1.0;
    const double near = std::exp(-std::pow(x * u, inv_beta));
    const double far = u > 0.0 ? std::exp(-std::pow(x / u, inv_beta)) : 0.0;
    return (near + far) / denom;
  };
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 2000;
  const quad::Result r = quad::integrate(integrand, 0.0, 1.0, opts);
  const double value = prefactor * r.value;
  const double err = std::abs(prefactor) * r.abs_error;
  if (!r.converged && err > 1e-10)
    throw ConvergenceError("mittag_leffler: integral representation did not converge");
  return {value, err, r.evaluations};
}

}  // namespace

EvalResult mittag_leffler(double beta, double z) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("mittag_leffler: requires 0 < beta <= 1");
  if (!(z <= 0.0)) throw DomainError("mittag_leffler: requires z <= 0");
  if (z == 0.0) return {1.0, 0.0, 1};
  if (beta == 1.0) return {std::exp(z), kEps * std::exp(z), 0};

  const double x = -z;
  if (std::pow(x, 1.0 / beta) <= 10.0) {
    // Neumaier summation of sum (-x)^n / Gamma(beta n + 1).
    const double log_x = std::log(x);
    double sum = 1.0, comp = 0.0, abs_sum = 1.0, prev = 1.0, term_abs = 1.0;
    int n = 1;
    for (; n < 2000; ++n) {
      term_abs = std::exp(n * log_x - std::lgamma(beta * n + 1.0));
      const double term = (n % 2 == 0) ? term_abs : -term_abs;
      const double t = sum + term;
      comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
      sum = t;
      abs_sum += term_abs;
      if (term_abs < prev && term_abs <= 1e-17 * abs_sum) break;
      prev = term_abs;
    }
    if (abs_sum <= kMittagLefflerSeriesGrowth) {
      const double value = sum + comp;
      return {value, 4.0 * kEps * abs_sum + term_abs, n + 1};
    }
  }
  return mittag_leffler_integral(beta, x);
}

// ---------------------------------------------------------------------------
// M-Wright

struct MWright::Series {
  std::vector<DD> coeff;          // (-1)^n c_n T^n, scaled by the reliable limit T
  std::vector<double> log_bound;  // log of |c_n| with |sin| replaced by 1
};

namespace {

constexpr int kMaxMWrightTerms = 20000;
constexpr double kTermFloorLog = -75.0;  // terms below e^-75 ~ 3e-33 are dropped

double log_term_bound(double beta, int n) {
  return std::lgamma(beta * (n + 1)) - std::lgamma(n + 1.0) - std::log(kPi);
}

// log sum_n |c_n| tau^n with |sin| <= 1, summed until terms fall below the floor.
double log_abs_series(const std::vector<double>& lb, double log_tau, int* terms_needed) {
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  int n = 0;
  for (; n < static_cast<int>(lb.size()); ++n) {
    const double l = lb[n] + n * log_tau;
    logs.push_back(l);
    if (l > peak) peak = l;
    const bool decreasing = n > 0 && l < logs[n - 1];
    if (decreasing && l < peak + kTermFloorLog - 40.0 && l < kTermFloorLog) break;
  }
  if (terms_needed) *terms_needed = n + 1;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - peak);
  return peak + std::log(acc);
}

}  // namespace

MWright::MWright(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("m_wright: requires 0 < beta < 1");
  if (beta > kMWrightMaxBeta)
    throw DomainError("m_wright: series evaluation requires beta <= " +
                      std::to_string(kMWrightMaxBeta));
  auto series = std::make_shared<Series>();
  series->log_bound.resize(kMaxMWrightTerms);
  for (int n = 0; n < kMaxMWrightTerms; ++n) series->log_bound[n] = log_term_bound(beta, n);

  // Reliable limit: the absolute series reaches kMWrightSeriesGrowth.
  const double target = std::log(kMWrightSeriesGrowth);
  double lo = 0.0, hi = 1.0;
  while (log_abs_series(series->log_bound, std::log(hi), nullptr) < target) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_abs_series(series->log_bound, std::log(mid), nullptr) < target)
      lo = mid;
    else
      hi = mid;
  }
  limit_ = lo;
  int needed = 0;
  log_abs_series(series->log_bound, std::log(limit_), &needed);
  if (needed >= kMaxMWrightTerms)
    throw DomainError("m_wright: series needs too many terms for beta = " + std::to_string(beta));

  series->coeff.resize(needed);
  // Unscaled c_n underflow double long before the series is exhausted, so
  // the coefficients carry the factor T^n and evaluation runs in tau / T.
  const __float128 pi_q = 4 * atanq(1);
  const __float128 beta_q = beta;
  const __float128 log_limit = logq(static_cast<__float128>(limit_));
  for (int n = 0; n < needed; ++n) {
    const __float128 arg = beta_q * (n + 1);
    __float128 c = sinq(pi_q * arg) *
                   expq(lgammaq(arg) - lgammaq(static_cast<__float128>(n + 1)) + n * log_limit) / pi_q;
    if (n % 2 == 1) c = -c;
    const double hi_part = static_cast<double>(c);
    series->coeff[n] = {hi_part, static_cast<double>(c - static_cast<__float128>(hi_part))};
  }
  series_ = std::move(series);
}

EvalResult MWright::operator()(double tau) const {
  if (!(tau >= 0.0)) throw DomainError("m_wright: requires tau >= 0");
  if (tau > limit_)
    throw ConvergenceError("m_wright: tau = " + std::to_string(tau) +
                           " beyond reliable series range " + std::to_string(limit_));
  const auto& coeff = series_->coeff;
  const auto& lb = series_->log_bound;
  if (tau == 0.0) {
    const double v = coeff[0].hi + coeff[0].lo;
    return {v, kEps * v, 1};
  }

  // Truncation index from the cheap log bounds, then Horner from the top so
  // no intermediate exceeds the absolute series.
  const double log_tau = std::log(tau);
  const int n_max = static_cast<int>(coeff.size());
  int n_last = 1;
  double last_bound = lb[0];
  for (; n_last < n_max - 1; ++n_last) {
    const double log_b = lb[n_last] + n_last * log_tau;
    const bool decreasing = log_b < lb[n_last - 1] + (n_last - 1) * log_tau;
    last_bound = log_b;
    if (decreasing && log_b < kTermFloorLog) break;
  }
  // x = tau / T as an exact-to-2^-104 double-double quotient.
  DD x{tau / limit_, 0.0};
  x.lo = std::fma(-x.hi, limit_, tau) / limit_;
  const double xd = x.hi;
  DD sum = coeff[n_last];
  double abs_sum = std::abs(coeff[n_last].hi);  // sum_{k>=n} |a_k| x^{k-n}
  double weighted = 0.0;                        // sum_{k>=n} (k-n) |a_k| x^{k-n}
  for (int n = n_last - 1; n >= 0; --n) {
    sum = add(mul(sum, x), coeff[n]);
    weighted = (weighted + abs_sum) * xd;
    abs_sum = abs_sum * xd + std::abs(coeff[n].hi);
  }
  // Each Horner step adds a few 2^-104 relative errors that are then carried
  // through the remaining multiplications; coefficients carry ~1e-30.
  const double err = (abs_sum + weighted) * 8.0 * 0x1p-104 + abs_sum * 1e-30 + 2.0 * std::exp(last_bound);
  const double value = sum.hi + sum.lo;
  return {value, err + kEps * std::abs(value), n_last + 1};
}

double MWright::tail_mass_bound(double tau) const {
  if (tau <= 0.0) return 1.0;
  double best = 0.0;  // log of the bound, capped at log 1
  for (int k = 1; k <= 5000; ++k) {
    const double l = std::lgamma(k + 1.0) - std::lgamma(beta_ * k + 1.0) - k * std::log(tau);
    best = std::min(best, l);
  }
  return std::exp(best);
}

const MWright& m_wright_instance(double beta) {
  thread_local std::optional<MWright> cached;
  if (!cached || cached->beta() != beta) cached.emplace(beta);
  return *cached;
}

EvalResult m_wright(double beta, double tau) { return m_wright_instance(beta)(tau); }

double m_wright_moment(double beta, double delta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("m_wright_moment: requires 0 < beta <= 1");
  if (beta == 1.0) return 1.0;
  if (!(delta > -1.0))
    throw DomainError("m_wright_moment: moment of order " + std::to_string(delta) +
                      " diverges; requires delta > -1");
  return gamma_function(delta + 1.0) / gamma_function(beta * delta + 1.0);
}

double time_kernel_constant(double alpha, int dim) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("time_kernel_constant: requires 0 < alpha <= 2");
  if (!(dim * alpha > 2.0)) throw DomainError("time_kernel_constant: requires d*alpha > 2");
  return (1.0 / alpha) * std::pow(2.0, -1.0 / alpha) * std::pow(kPi, -0.5 * dim) *
         gamma_function(0.5 * dim - 1.0 / alpha);
}

double green_constant(const ModelParams& params) {
  if (auto why = params.green_violation()) throw DomainError("green_constant: " + *why);
  return time_kernel_constant(params.alpha, params.dim) *
         m_wright_moment(params.beta, -1.0 / params.alpha);
}

}  // namespace ggbm
