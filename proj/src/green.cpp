#include "ggbm/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ggbm/errors.hpp"
#include "ggbm/quadrature.hpp"
#include "ggbm/specfun.hpp"

namespace ggbm {
namespace {

constexpr double kPi = std::numbers::pi;

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void check_point(int dim, std::span<const double> p, const char* what) {
  if (static_cast<int>(p.size()) != dim)
    throw DomainError(std::string(what) + ": point must have " + std::to_string(dim) + " coordinates");
}

// L1 mass of a radial profile over the shell a <= |y| <= b.
double radial_mass(int dim, const std::function<double(double)>& profile, double a, double b) {
  if (b <= a) return 0.0;
  auto f = [&](double r) { return std::pow(r, dim - 1) * profile(r); };
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;
  return unit_sphere_area(dim) * quad::integrate(f, a, b, opts).value;
}

// int_0^phi sin^{k}(t) dt
double sine_power_integral(int k, double phi) {
  if (k == 0) return phi;
  if (k == 1) return 1.0 - std::cos(phi);
  auto f = [k](double t) { return std::pow(std::sin(t), k); };
  quad::Options opts;
  opts.abs_tol = 1e-16;
  opts.rel_tol = 1e-14;
  return quad::integrate(f, 0.0, phi, opts).value;
}

struct Direction {
  std::vector<double> unit;
  double weight;
};

// Product rule for the normalized surface measure on S^{d-1}: Gauss-Legendre
// in each polar angle (with its sin^k weight) and the trapezoid rule in the
// azimuth.
std::vector<Direction> sphere_rule(int dim, int nodes) {
  std::vector<Direction> out;
  const int n_az = 2 * nodes;
  std::vector<double> gl_x(nodes), gl_w(nodes);
  quad::gauss_legendre(nodes, gl_x, gl_w);
  const int n_polar = dim - 2;
  std::vector<int> idx(std::max(n_polar, 0), 0);
  while (true) {
    double w = 1.0;
    std::vector<double> sines, cosines;
    for (int i = 0; i < n_polar; ++i) {
      const double phi = 0.5 * kPi * (gl_x[idx[i]] + 1.0);
      w *= 0.5 * kPi * gl_w[idx[i]] * std::pow(std::sin(phi), dim - 2 - i);
      sines.push_back(std::sin(phi));
      cosines.push_back(std::cos(phi));
    }
    for (int a = 0; a < n_az; ++a) {
      const double theta = 2.0 * kPi * a / n_az;
      Direction dir{std::vector<double>(dim), w * 2.0 * kPi / n_az};
      double prod = 1.0;
      for (int i = 0; i < n_polar; ++i) {
        dir.unit[i] = prod * cosines[i];
        prod *= sines[i];
      }
      dir.unit[dim - 2] = prod * std::cos(theta);
      dir.unit[dim - 1] = prod * std::sin(theta);
      out.push_back(std::move(dir));
    }
    int k = 0;
    while (k < n_polar && ++idx[k] == nodes) idx[k++] = 0;
    if (k == n_polar) break;
  }
  double total = 0.0;
  for (const auto& d : out) total += d.weight;
  for (auto& d : out) d.weight /= total;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Test functions

double TestFunction::operator()(std::span<const double> y) const {
  if (kind == TestFunctionKind::Custom) return custom(y);
  return profile(distance(y, center));
}

TestFunction TestFunction::shifted(std::span<const double> h) const {
  check_point(dim, h, "shifted");
  TestFunction g = *this;
  if (is_radial()) {
    for (int i = 0; i < dim; ++i) g.center[i] = center[i] - h[i];
    return g;
  }
  std::vector<double> hv(h.begin(), h.end());
  double h_norm = 0.0;
  for (double v : hv) h_norm += v * v;
  h_norm = std::sqrt(h_norm);
  auto inner = custom;
  g.custom = [inner, hv](std::span<const double> y) {
    std::vector<double> z(y.begin(), y.end());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += hv[i];
    return inner(z);
  };
  // |y| > R implies |y + h| > R - |h|.
  auto tail = tail_l1;
  const double l1 = l1_norm;
  g.tail_l1 = [tail, h_norm, l1](double r) { return r > h_norm ? tail(r - h_norm) : l1; };
  return g;
}

std::string TestFunction::kind_name() const {
  switch (kind) {
    case TestFunctionKind::Gaussian: return "gaussian";
    case TestFunctionKind::Bump: return "bump";
    case TestFunctionKind::Custom: return "custom";
  }
  return "custom";
}

TestFunction gaussian_function(int dim, double sigma, std::vector<double> center) {
  if (dim < 1) throw DomainError("gaussian_function: requires dim >= 1");
  if (!(sigma > 0.0)) throw DomainError("gaussian_function: requires sigma > 0");
  if (center.empty()) center.assign(dim, 0.0);
  check_point(dim, center, "gaussian_function");
  TestFunction f;
  f.kind = TestFunctionKind::Gaussian;
  f.dim = dim;
  f.scale = sigma;
  f.center = std::move(center);
  f.sup_norm = 1.0;
  f.l1_norm = std::pow(2.0 * kPi * sigma * sigma, 0.5 * dim);
  f.profile = [sigma](double r) { return std::exp(-0.5 * r * r / (sigma * sigma)); };
  auto profile = f.profile;
  f.tail_l1 = [dim, profile, sigma](double r) {
    if (r <= 0.0) return std::pow(2.0 * kPi * sigma * sigma, 0.5 * dim);
    auto g = [&](double s) { return std::pow(s, dim - 1) * profile(s); };
    quad::Options opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 1e-10;
    return unit_sphere_area(dim) * quad::integrate_to_infinity(g, r, opts).value;
  };
  return f;
}

TestFunction bump_function(int dim, double radius, std::vector<double> center) {
  if (dim < 1) throw DomainError("bump_function: requires dim >= 1");
  if (!(radius > 0.0)) throw DomainError("bump_function: requires radius > 0");
  if (center.empty()) center.assign(dim, 0.0);
  check_point(dim, center, "bump_function");
  TestFunction f;
  f.kind = TestFunctionKind::Bump;
  f.dim = dim;
  f.scale = radius;
  f.center = std::move(center);
  f.sup_norm = 1.0;
  f.profile = [radius](double r) {
    const double s = r / radius;
    return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
  };
  f.l1_norm = radial_mass(dim, f.profile, 0.0, radius);
  auto profile = f.profile;
  f.tail_l1 = [dim, profile, radius](double r) { return radial_mass(dim, profile, std::max(r, 0.0), radius); };
  return f;
}

TestFunction custom_function(int dim, std::function<double(std::span<const double>)> fn, double sup_norm,
                             double l1_norm, std::function<double(double)> tail_l1) {
  TestFunction f;
  f.kind = TestFunctionKind::Custom;
  f.dim = dim;
  f.center.assign(dim, 0.0);
  f.sup_norm = sup_norm;
  f.l1_norm = l1_norm;
  f.custom = std::move(fn);
  f.tail_l1 = std::move(tail_l1);
  return f;
}

double unit_sphere_area(int dim) { return 2.0 * std::pow(kPi, 0.5 * dim) / gamma_function(0.5 * dim); }

// ---------------------------------------------------------------------------
// Green density and kernels

GreenDensity make_green_density(const ModelParams& params) {
  return {params, green_constant(params), params.dim - 2.0 / params.alpha};
}

double green_density_at(const GreenDensity& gd, std::span<const double> x, std::span<const double> y) {
  check_point(gd.params.dim, x, "green_density_at");
  check_point(gd.params.dim, y, "green_density_at");
  const double r = distance(x, y);
  if (r == 0.0) throw DomainError("green_density_at: singular at x = y");
  return gd.constant * std::pow(r, -gd.exponent);
}

double time_integral_kernel(double alpha, int dim, double tau, double r) {
  if (!(tau > 0.0) || !(r > 0.0)) throw DomainError("time_integral_kernel: requires tau > 0 and r > 0");
  return time_kernel_constant(alpha, dim) * std::pow(tau, -1.0 / alpha) * std::pow(r, 2.0 / alpha - dim);
}

double continuity_constant(const GreenDensity& gd) {
  const double near = unit_sphere_area(gd.params.dim) * gd.params.alpha / 2.0;
  return gd.constant * std::max(near, 1.0);
}

// ---------------------------------------------------------------------------
// Potential

PotentialResult potential(const GreenDensity& gd, const TestFunction& f, std::span<const double> x,
                          const RadialPotentialSpec& spec) {
  const int dim = gd.params.dim;
  const double alpha = gd.params.alpha;
  check_point(dim, x, "potential");
  if (f.dim != dim) throw DomainError("potential: test function dimension mismatch");

  PotentialResult out;
  out.continuity_constant = continuity_constant(gd);
  out.cl_norm = f.cl_norm();
  const double omega = unit_sphere_area(dim);
  const double pref = gd.constant * omega * 0.5 * alpha;

  // Angular average of f(x + r w) over the unit sphere.
  std::function<double(double)> angular;
  double offset = 0.0;  // |center - x| for radial f
  std::vector<Direction> rule;
  if (f.is_radial()) {
    offset = distance(f.center, x);
    if (offset == 0.0) {
      angular = f.profile;
    } else {
      const int k = dim - 2;
      const double norm = sine_power_integral(k, kPi);
      angular = [&, k, norm](double r) {
        auto g = [&](double phi) {
          const double s2 = r * r + offset * offset - 2.0 * r * offset * std::cos(phi);
          return f.profile(std::sqrt(std::max(s2, 0.0))) * (k == 0 ? 1.0 : std::pow(std::sin(phi), k));
        };
        quad::Options opts;
        opts.abs_tol = 1e-17;
        opts.rel_tol = 1e-12;
        return quad::integrate(g, 0.0, kPi, opts).value / norm;
      };
    }
  } else {
    rule = sphere_rule(dim, spec.angular_nodes);
    angular = [&](double r) {
      std::vector<double> y(dim);
      double acc = 0.0;
      for (const auto& d : rule) {
        for (int i = 0; i < dim; ++i) y[i] = x[i] + r * d.unit[i];
        acc += d.weight * f.custom(y);
      }
      return acc;
    };
  }

  // Truncation radius: |y| > R means the kernel is below R^{2/alpha - d} and f(x + y)
  // lives outside the ball of radius R - offset around f's centre.
  const double target = spec.tail_fraction * out.continuity_constant * out.cl_norm;
  const double center_shift = f.is_radial() ? offset : std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  double radius = center_shift + f.scale;
  double tail = 0.0;
  for (int it = 0; it < 200; ++it) {
    tail = gd.constant * std::pow(radius, -gd.exponent) * f.tail_l1(std::max(radius - center_shift, 0.0));
    if (tail <= target) break;
    radius *= 1.25;
  }

  std::vector<double> r_breaks = {0.0};
  if (f.is_radial()) {
    for (double m : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
      const double b = offset + m * f.scale;
      if (b > 0.0 && b < radius) r_breaks.push_back(b);
    }
  }
  r_breaks.push_back(radius);
  std::sort(r_breaks.begin(), r_breaks.end());
  r_breaks.erase(std::unique(r_breaks.begin(), r_breaks.end()), r_breaks.end());
  std::vector<double> u_breaks;
  for (double b : r_breaks) u_breaks.push_back(std::pow(b, 2.0 / alpha));

  const double half_alpha = 0.5 * alpha;
  auto integrand = [&](double u) { return angular(std::pow(u, half_alpha)); };
  quad::Options opts;
  opts.abs_tol = spec.abs_tol / pref;
  opts.rel_tol = spec.rel_tol;
  const quad::Result r = quad::integrate(integrand, u_breaks, opts);
  if (!r.converged && r.abs_error > 1e-6 * std::abs(r.value))
    throw ConvergenceError("potential: radial quadrature did not converge");

  out.value = pref * r.value;
  out.tail_bound = tail;
  out.abs_error = pref * r.abs_error + tail;
  out.radius = radius;
  return out;
}

double green_measure_of_ball(const GreenDensity& gd, std::span<const double> x, std::span<const double> center,
                             double r) {
  const int dim = gd.params.dim;
  check_point(dim, x, "green_measure_of_ball");
  check_point(dim, center, "green_measure_of_ball");
  if (!(r > 0.0)) throw DomainError("green_measure_of_ball: requires r > 0");
  const double alpha = gd.params.alpha;
  const double pref = gd.constant * unit_sphere_area(dim);
  const double rho = distance(x, center);

  // Shells |y - x| = s with s < r - rho lie entirely in the ball.
  double total = 0.0;
  if (rho < r) total += pref * 0.5 * alpha * std::pow(r - rho, 2.0 / alpha);
  if (rho == 0.0) return total;

  const int k = dim - 2;
  const double norm = sine_power_integral(k, kPi);
  auto fraction = [&](double s) {
    const double c = (s * s + rho * rho - r * r) / (2.0 * s * rho);
    if (c <= -1.0) return 1.0;
    if (c >= 1.0) return 0.0;
    return sine_power_integral(k, std::acos(c)) / norm;
  };
  auto integrand = [&](double s) { return std::pow(s, 2.0 / alpha - 1.0) * fraction(s); };
  quad::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-12;
  const quad::Result res = quad::integrate(integrand, std::abs(r - rho), r + rho, opts);
  return total + pref * res.value;
}

}  // namespace ggbm
