#include "ggbm/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ggbm/errors.hpp"
#include "ggbm/green.hpp"
#include "ggbm/io.hpp"
#include "ggbm/montecarlo.hpp"
#include "ggbm/process.hpp"
#include "ggbm/quadrature.hpp"
#include "ggbm/randvar.hpp"
#include "ggbm/specfun.hpp"
#include "ggbm/stats.hpp"

namespace ggbm {
namespace {

constexpr double kSigmas = 3.0;
constexpr double kKsSignificance = 0.01;

Check compare(std::string name, std::string anchor, double expected, double observed, double tolerance) {
  const bool pass = std::abs(observed - expected) <= tolerance;
  return {std::move(name), std::move(anchor), expected, observed, tolerance, pass};
}

std::string label(const ModelParams& p) {
  return "beta=" + format_number(p.beta, 6) + " alpha=" + format_number(p.alpha, 6) +
         " d=" + std::to_string(p.dim);
}

std::vector<ModelParams> params_or(const VerifyConfig& cfg, std::vector<ModelParams> defaults) {
  if (cfg.params) return {*cfg.params};
  return defaults;
}

// Runs body(state, i) for i in [0, n) over `threads` workers; state is built
// once per worker by make_state(). Results must be written by index.
template <class MakeState, class Body>
void parallel_indices(std::int64_t n, int threads, MakeState make_state, Body body) {
  constexpr std::int64_t chunk = 256;
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    auto state = make_state();
    while (true) {
      const std::int64_t begin = next.fetch_add(chunk);
      if (begin >= n) break;
      const std::int64_t end = std::min(n, begin + chunk);
      for (std::int64_t i = begin; i < end; ++i) body(state, i);
    }
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), (n + chunk - 1) / chunk));
  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
}

// Paths on the grid {0, 0.5, 1, 1.5, 2}; row i holds path i (5 * dim values).
constexpr double kGridTmax = 2.0;
constexpr int kGridSteps = 4;

int grid_index(double t) { return static_cast<int>(std::lround(t / kGridTmax * kGridSteps)); }

std::vector<double> sample_paths(const ModelParams& params, std::int64_t n, std::uint64_t seed, int threads,
                                 Representation rep = Representation::Product) {
  const GridSpec grid{kGridTmax, kGridSteps};
  const std::size_t row = static_cast<std::size_t>(grid.n_points()) * params.dim;
  std::vector<double> out(static_cast<std::size_t>(n) * row);
  parallel_indices(
      n, threads, [&] { return GgbmSampler(params, grid); },
      [&](GgbmSampler& sampler, std::int64_t i) {
        RngStream rng(SeedSpec{seed, static_cast<std::uint64_t>(i)});
        sampler.draw(rng, std::span<double>(out.data() + static_cast<std::size_t>(i) * row, row), rep);
      });
  return out;
}

double value_at(const std::vector<double>& paths, const ModelParams& p, std::int64_t i, double t, int coord) {
  const std::size_t row = static_cast<std::size_t>(kGridSteps + 1) * p.dim;
  return paths[static_cast<std::size_t>(i) * row + static_cast<std::size_t>(grid_index(t)) * p.dim + coord];
}

Check mc_check(std::string name, std::string anchor, double expected, const std::vector<double>& samples) {
  const MeanSe m = mean_and_se(samples);
  return compare(std::move(name), std::move(anchor), expected, m.mean, kSigmas * m.std_error);
}

Check ks_check(std::string name, std::string anchor, std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const KsResult ks = ks_two_sample(std::move(a), std::move(b));
  // Critical statistic at the 1% level, c(0.01) = sqrt(-ln(0.005)/2).
  const double critical = std::sqrt(-0.5 * std::log(kKsSignificance / 2.0)) * std::sqrt((na + nb) / (na * nb));
  Check c{std::move(name), std::move(anchor), 0.0, ks.statistic, critical, ks.p_value > kKsSignificance};
  return c;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"paper_anchor", c.anchor},
                   {"expected", c.expected},
                   {"observed", c.observed},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
  return {{"suite", suite}, {"checks", arr}, {"details", details}, {"pass", pass()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"specfun", "moments", "covariance",
                                                 "charfun", "representation", "green"};
  return names;
}

// ---------------------------------------------------------------------------

Report verify_specfun(const VerifyConfig&) {
  Report rep{"specfun", {}, {}};
  const std::string laplace = "Mittag-Leffler function is the Laplace transform of M_beta";
  const std::string moments = "generalized moments of M_beta";
  quad::Options opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-12;

  for (double beta : {0.3, 0.5, 0.7}) {
    const MWright m(beta);
    const double limit = m.reliable_limit();
    const double tail = m.tail_mass_bound(limit);
    for (double s : {0.1, 1.0, 5.0}) {
      auto f = [&](double tau) { return std::exp(-s * tau) * m(tau).value; };
      const double breaks[] = {0.0, 0.5, 1.0, 2.0, limit};
      const double integral = quad::integrate(f, breaks, opts).value;
      rep.checks.push_back(compare("laplace beta=" + format_number(beta) + " s=" + format_number(s), laplace,
                                   mittag_leffler(beta, -s).value, integral, 1e-6 + tail));
    }
    for (double delta : {-0.6, -1.0 / 1.5, -0.5, 0.5, 1.0, 2.0}) {
      // tau = u^{1/(delta+1)} removes tau^delta: tau^delta dtau = du / (delta+1).
      const double e = 1.0 / (delta + 1.0);
      auto f = [&](double u) { return m(std::min(std::pow(u, e), limit)).value * e; };
      std::vector<double> breaks = {0.0};
      for (double b : {0.5, 1.0, 2.0, limit})
        if (b <= limit) breaks.push_back(std::pow(b, delta + 1.0));
      const double integral = quad::integrate(f, breaks, opts).value;
      const double exact = m_wright_moment(beta, delta);
      rep.checks.push_back(compare("moment beta=" + format_number(beta) + " delta=" + format_number(delta, 6),
                                   moments, exact, integral, 1e-6 * std::abs(exact)));
    }
    // Strict decrease of E_beta on a grid of [-50, 0].
    double prev = 2.0, worst_step = -1.0;
    bool decreasing = true;
    for (int i = 0; i <= 500; ++i) {
      const double v = mittag_leffler(beta, -0.1 * i).value;
      if (!(v < prev)) decreasing = false;
      if (i > 0) worst_step = std::max(worst_step, v - prev);
      prev = v;
    }
    rep.checks.push_back({"mittag-leffler decreasing beta=" + format_number(beta), "complete monotonicity on z <= 0",
                          0.0, worst_step, 0.0, decreasing});
  }

  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (double tau : {0.0, 1.0, 2.0, 4.0})
    rep.checks.push_back(compare("m_wright beta=0.5 tau=" + format_number(tau), "M_{1/2} is a half-Gaussian density",
                                 inv_sqrt_pi * std::exp(-tau * tau / 4.0), m_wright(0.5, tau).value, 1e-13));

  // Time integral in closed form vs quadrature in log-time.
  for (double alpha : {1.2, 1.5, 2.0})
    for (int d : {2, 3, 4})
      for (double tau : {0.5, 2.0}) {
        const double r = 1.0;
        auto f = [&](double v) {
          const double t = std::exp(v);
          const double s = std::pow(t, alpha) * tau;
          return std::pow(2.0 * std::numbers::pi * s, -0.5 * d) * std::exp(-r * r / (2.0 * s)) * t;
        };
        std::vector<double> breaks;
        for (double v = -40.0; v <= 600.0; v += 10.0) breaks.push_back(v);
        quad::Options o;
        o.abs_tol = 0.0;
        o.rel_tol = 1e-13;
        const double numeric = quad::integrate(f, breaks, o).value;
        const double closed = time_integral_kernel(alpha, d, tau, r);
        rep.checks.push_back(compare("time kernel alpha=" + format_number(alpha) + " d=" + std::to_string(d) +
                                         " tau=" + format_number(tau),
                                     "closed form of the time integral", closed, numeric, 1e-8 * closed));
      }

  const ModelParams brownian{1.0, 1.0, 3};
  rep.checks.push_back(compare("green constant brownian d=3", "Brownian Green function constant",
                               1.0 / (2.0 * std::numbers::pi), green_constant(brownian), 1e-12));
  for (const ModelParams& p : {ModelParams{0.5, 1.5, 3}, ModelParams{0.8, 1.2, 2}, ModelParams{0.9, 2.0, 2}}) {
    const double d_direct = time_kernel_constant(p.alpha, p.dim) * m_wright_moment(p.beta, -1.0 / p.alpha);
    rep.checks.push_back(compare("green constant factorization " + label(p), "D = C(alpha,d) E[Y^{-1/alpha}]",
                                 d_direct, green_constant(p), 1e-14 * d_direct));
  }
  return rep;
}

Report verify_moments(const VerifyConfig& cfg) {
  Report rep{"moments", {}, {}};
  const std::string anchor = "moments of B(t)";
  for (ModelParams p : params_or(cfg, {{0.5, 1.5, 1}, {0.8, 1.2, 1}})) {
    p.dim = 1;  // the even-moment formula is checked in one dimension
    const auto paths = sample_paths(p, cfg.paths, cfg.seed, cfg.threads);
    for (double t : {0.5, 1.0, 2.0}) {
      for (int power = 1; power <= 4; ++power) {
        std::vector<double> samples(cfg.paths);
        for (std::int64_t i = 0; i < cfg.paths; ++i) samples[i] = std::pow(value_at(paths, p, i, t, 0), power);
        double expected = 0.0;
        if (power % 2 == 0) {
          const int n = power / 2;
          expected = factorial(2 * n) / (std::pow(2.0, n) * gamma_function(p.beta * n + 1.0)) * std::pow(t, p.alpha * n);
        }
        rep.checks.push_back(mc_check("E[B(t)^" + std::to_string(power) + "] " + label(p) + " t=" + format_number(t),
                                      anchor, expected, samples));
      }
    }
    // Law of the mixing variable.
    std::vector<double> y(cfg.paths);
    parallel_indices(
        cfg.paths, cfg.threads, [] { return 0; },
        [&](int, std::int64_t i) {
          RngStream rng(SeedSpec{cfg.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(i)});
          y[i] = sample_y_beta(p.beta, rng).value;
        });
    for (double delta : {0.5, 1.0, 2.0, -1.0 / 1.5, -0.5}) {
      std::vector<double> s(y.size());
      std::transform(y.begin(), y.end(), s.begin(), [delta](double v) { return std::pow(v, delta); });
      rep.checks.push_back(mc_check("E[Y^" + format_number(delta, 6) + "] beta=" + format_number(p.beta),
                                    "generalized moments of M_beta", m_wright_moment(p.beta, delta), s));
    }
  }
  return rep;
}

Report verify_covariance(const VerifyConfig& cfg) {
  Report rep{"covariance", {}, {}};
  const std::string anchor = "covariance function";
  for (const ModelParams& p : params_or(cfg, {{0.5, 1.5, 2}, {0.8, 1.2, 2}})) {
    const auto paths = sample_paths(p, cfg.paths, cfg.seed, cfg.threads);
    const std::pair<double, double> pairs[] = {{0.5, 0.5}, {0.5, 1.0}, {1.0, 2.0}, {0.5, 2.0}, {1.5, 2.0}};
    for (const auto& [s, t] : pairs) {
      std::vector<double> samples(cfg.paths);
      for (std::int64_t i = 0; i < cfg.paths; ++i) {
        double dot = 0.0;
        for (int j = 0; j < p.dim; ++j) dot += value_at(paths, p, i, t, j) * value_at(paths, p, i, s, j);
        samples[i] = dot;
      }
      const double expected = p.dim * (std::pow(t, p.alpha) + std::pow(s, p.alpha) - std::pow(std::abs(t - s), p.alpha)) /
                              (2.0 * gamma_function(p.beta + 1.0));
      rep.checks.push_back(mc_check("E[(B(t),B(s))] " + label(p) + " s=" + format_number(s) + " t=" + format_number(t),
                                    anchor, expected, samples));
    }
  }
  return rep;
}

Report verify_charfun(const VerifyConfig& cfg) {
  Report rep{"charfun", {}, {}};
  const std::string anchor = "characteristic function of the increments";
  for (const ModelParams& p : params_or(cfg, {{0.5, 1.5, 1}, {0.8, 1.2, 1}})) {
    const auto paths = sample_paths(p, cfg.paths, cfg.seed, cfg.threads);
    const std::pair<double, double> pairs[] = {{0.0, 1.0}, {0.5, 1.0}, {0.5, 2.0}};
    for (const auto& [s, t] : pairs)
      for (double k : {0.5, 1.0, 2.0}) {
        std::vector<double> re(cfg.paths), im(cfg.paths);
        for (std::int64_t i = 0; i < cfg.paths; ++i) {
          const double inc = value_at(paths, p, i, t, 0) - value_at(paths, p, i, s, 0);
          re[i] = std::cos(k * inc);
          im[i] = std::sin(k * inc);
        }
        const double expected = mittag_leffler(p.beta, -0.5 * k * k * std::pow(t - s, p.alpha)).value;
        const std::string tag = label(p) + " k=" + format_number(k) + " s=" + format_number(s) + " t=" + format_number(t);
        rep.checks.push_back(mc_check("Re E[exp(ik(B(t)-B(s)))] " + tag, anchor, expected, re));
        rep.checks.push_back(mc_check("Im E[exp(ik(B(t)-B(s)))] " + tag, anchor, 0.0, im));
      }
  }
  return rep;
}

Report verify_representation(const VerifyConfig& cfg) {
  Report rep{"representation", {}, {}};
  for (const ModelParams& p : params_or(cfg, {{0.5, 1.5, 1}, {0.8, 1.2, 1}})) {
    // Independent master seeds so the two samples are independent.
    const auto prod = sample_paths(p, cfg.paths, cfg.seed, cfg.threads, Representation::Product);
    const auto sub = sample_paths(p, cfg.paths, cfg.seed + 1, cfg.threads, Representation::Subordinated);
    auto column = [&](const std::vector<double>& paths, double t, double scale) {
      std::vector<double> v(cfg.paths);
      for (std::int64_t i = 0; i < cfg.paths; ++i) v[i] = value_at(paths, p, i, t, 0) * scale;
      return v;
    };
    for (double t : {0.5, 1.0})
      rep.checks.push_back(ks_check("product vs subordinated " + label(p) + " t=" + format_number(t),
                                    "product and subordination representations agree in law",
                                    column(prod, t, 1.0), column(sub, t, 1.0)));
    // B(2t) / 2^{alpha/2} against B(t).
    const double c = 2.0;
    for (double t : {0.5, 1.0})
      rep.checks.push_back(ks_check("self-similarity c=2 " + label(p) + " t=" + format_number(t),
                                    "alpha/2 self-similarity", column(sub, c * t, std::pow(c, -p.hurst())),
                                    column(prod, t, 1.0)));
  }
  return rep;
}

Report verify_green(const VerifyConfig& cfg) {
  Report rep{"green", {}, {}};
  const std::string anchor = "expected perpetual integral equals the Green potential";
  nlohmann::json estimates = nlohmann::json::array();
  for (const ModelParams& p : params_or(cfg, {{0.5, 1.5, 3}, {0.8, 1.2, 2}, {0.9, 2.0, 2}})) {
    if (auto why = p.green_violation()) throw DomainError("verify green: " + *why);
    const GreenDensity gd = make_green_density(p);
    const TestFunction f = gaussian_function(p.dim, 1.0);
    const std::vector<double> x(p.dim, 0.0);
    const PotentialResult analytic = potential(gd, f, x);

    // Radial closed form for the unit Gaussian at its centre.
    const double closed = gd.constant * unit_sphere_area(p.dim) * std::pow(2.0, 1.0 / p.alpha - 1.0) *
                          gamma_function(1.0 / p.alpha);
    rep.checks.push_back(compare("potential quadrature vs closed form " + label(p), "Green potential of a Gaussian",
                                 closed, analytic.value, 1e-8 * closed));

    PerpetualSpec spec;
    spec.t_max = cfg.t_max;
    spec.n_steps = cfg.steps;
    spec.n_paths = cfg.paths;
    spec.seed = cfg.seed;
    spec.threads = cfg.threads;
    const Estimate est = estimate_potential_mc(p, f, x, spec);
    const double budget = kSigmas * est.std_error + est.tail_bound + est.discretization_bound;
    rep.checks.push_back(compare("monte carlo perpetual integral " + label(p), anchor, analytic.value, est.mean, budget));
    nlohmann::json e = to_json(est, p, f, x);
    e["analytic_potential"] = analytic.value;
    estimates.push_back(e);

    // Continuity bound over a Gaussian family.
    const double k_const = continuity_constant(gd);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double sigma = 0.1 * std::pow(100.0, i / 9.0);
      const TestFunction g = gaussian_function(p.dim, sigma);
      worst = std::max(worst, std::abs(potential(gd, g, x).value) / g.cl_norm());
    }
    rep.checks.push_back({"continuity bound " + label(p), "|V(f,x)| <= K ||f||_CL", k_const, worst, 0.0,
                          worst <= k_const});
  }
  rep.details["estimates"] = estimates;
  return rep;
}

Report run_suite(const std::string& name, const VerifyConfig& cfg) {
  if (name == "specfun") return verify_specfun(cfg);
  if (name == "moments") return verify_moments(cfg);
  if (name == "covariance") return verify_covariance(cfg);
  if (name == "charfun") return verify_charfun(cfg);
  if (name == "representation") return verify_representation(cfg);
  if (name == "green") return verify_green(cfg);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace ggbm
