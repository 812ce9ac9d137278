#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "ggbm/errors.hpp"
#include "ggbm/green.hpp"
#include "ggbm/specfun.hpp"

using namespace ggbm;

namespace {

const double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// D int f(x + y) |y|^{2/alpha - 3} dy in d = 3 with x on the first axis, in
// polar coordinates around that axis.
template <class F>
double oracle_3d(const GreenDensity& gd, F radial_of_distance, double x) {
  const double e = 2.0 / gd.params.alpha - 3.0;
  auto shell = [&](double r) {
    auto ang = [&](double c) {
      const double dist2 = x * x + r * r + 2.0 * x * r * c;
      return radial_of_distance(std::sqrt(std::max(dist2, 0.0)));
    };
    const double avg = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(ang, -1.0, 1.0, 12, 1e-13);
    return 2.0 * kPi * avg * std::pow(r, e + 2.0);
  };
  // u = r^{2/alpha} removes the singularity at the origin.
  const double a = gd.params.alpha;
  auto in_u = [&](double u) {
    const double r = std::pow(u, a / 2.0);
    return shell(r) * (a / 2.0) * std::pow(u, a / 2.0 - 1.0);
  };
  return gd.constant * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(in_u, 0.0, 30.0, 15, 1e-13) +
         gd.constant * boost::math::quadrature::exp_sinh<double>().integrate(in_u, 30.0, INFINITY);
}

}  // namespace

TEST_CASE("unit sphere area") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * kPi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * kPi));
  CHECK(unit_sphere_area(4) == doctest::Approx(2 * kPi * kPi));
}

TEST_CASE("test functions") {
  const auto g = gaussian_function(3, 2.0);
  CHECK(g.sup_norm == 1.0);
  CHECK(rel(g.l1_norm, std::pow(2 * kPi * 4.0, 1.5)) < 1e-15);
  const std::vector<double> y = {1.0, 0.0, 1.0};
  CHECK(g(y) == doctest::Approx(std::exp(-2.0 / 8.0)));
  CHECK(g.tail_l1(0.0) >= g.l1_norm * (1 - 1e-12));
  CHECK(g.tail_l1(20.0) < 1e-15 * g.l1_norm);
  const auto b = bump_function(2, 1.5);
  const std::vector<double> out = {1.5, 0.1};
  CHECK(b(out) == 0.0);
  CHECK(b.tail_l1(1.5) == 0.0);
  // l1 of the planar bump by quadrature.
  auto prof = [](double r) { return r < 1.5 ? std::exp(1.0 - 1.0 / (1.0 - r * r / 2.25)) * 2 * kPi * r : 0.0; };
  CHECK(rel(b.l1_norm, boost::math::quadrature::gauss_kronrod<double, 61>::integrate(prof, 0.0, 1.5, 10, 1e-14)) < 1e-10);
  CHECK_THROWS_AS(gaussian_function(2, 0.0), DomainError);
}

TEST_CASE("green density") {
  CHECK_THROWS_AS(make_green_density({0.5, 1.0, 3}), DomainError);
  CHECK_THROWS_AS(make_green_density({0.5, 1.5, 1}), DomainError);
  const auto gd = make_green_density({0.5, 1.5, 3});
  CHECK(gd.exponent == doctest::Approx(3.0 - 2.0 / 1.5));
  const std::vector<double> x = {0, 0, 0}, y = {0, 2, 0};
  CHECK(rel(green_density_at(gd, x, y), gd.constant * std::pow(2.0, -gd.exponent)) < 1e-15);
  // time kernel integrated against M_beta reproduces the density.
  boost::math::quadrature::exp_sinh<double> integrator;
  const double via_tau = integrator.integrate([&](double tau) {
    const MWright& m = m_wright_instance(0.5);
    return tau < m.reliable_limit() ? time_integral_kernel(1.5, 3, tau, 2.0) * m(tau).value : 0.0;
  });
  CHECK(rel(via_tau, green_density_at(gd, x, y)) < 1e-8);
}

TEST_CASE("brownian potential of a gaussian") {
  // V = (1 / 2 pi) int exp(-|y|^2 / 2 s^2) / |y| dy = 2 s^2.
  const auto gd = make_green_density({1.0, 1.0, 3});
  const std::vector<double> x = {0, 0, 0};
  for (double s : {0.3, 1.0, 4.0}) CHECK(rel(potential(gd, gaussian_function(3, s), x).value, 2 * s * s) < 1e-11);
}

TEST_CASE("potential of a shifted gaussian against nested quadrature") {
  for (const ModelParams& p : {ModelParams{0.5, 1.5, 3}, ModelParams{0.9, 1.1, 3}}) {
    const auto gd = make_green_density(p);
    const auto f = gaussian_function(3, 0.8);
    const std::vector<double> x = {1.3, 0.0, 0.0};
    const auto res = potential(gd, f, x);
    const double oracle = oracle_3d(gd, [](double r) { return std::exp(-r * r / (2 * 0.64)); }, 1.3);
    CHECK(rel(res.value, oracle) < 1e-9);
    CHECK(res.abs_error < 1e-8 * res.value);
  }
}

TEST_CASE("custom and radial evaluations agree") {
  const auto gd = make_green_density({0.7, 1.6, 3});
  const auto g = gaussian_function(3, 1.0, {0.5, -0.2, 0.1});
  const auto c = custom_function(
      3, [&g](std::span<const double> y) { return g(y); }, g.sup_norm, g.l1_norm,
      [](double r) {
        // Gaussian mass beyond r around the origin, bounded via the centre offset.
        const double rr = std::max(0.0, r - 0.6);
        return std::pow(2 * kPi, 1.5) * boost::math::gamma_q(1.5, rr * rr / 2.0);
      });
  const std::vector<double> x = {0.3, 0.4, -0.5};
  CHECK(rel(potential(gd, c, x).value, potential(gd, g, x).value) < 1e-8);
}

TEST_CASE("bump potential against nested quadrature") {
  const auto gd = make_green_density({0.8, 1.2, 3});
  const auto f = bump_function(3, 1.0);
  const std::vector<double> x = {0.4, 0.0, 0.0};
  const double oracle = oracle_3d(gd, [](double r) { return r < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }, 0.4);
  CHECK(rel(potential(gd, f, x).value, oracle) < 1e-7);
}

TEST_CASE("green measure of balls") {
  const auto gd = make_green_density({0.5, 1.5, 3});
  const std::vector<double> c = {0, 0, 0};
  const double r = 0.7;
  CHECK(rel(green_measure_of_ball(gd, c, c, r), gd.constant * 4 * kPi * 0.75 * std::pow(r, 2 / 1.5)) < 1e-12);
  // A small distant ball sees a nearly constant density.
  const std::vector<double> far = {2.0, 0, 0};
  const double eps = 0.01;
  const double approx = gd.constant * std::pow(2.0, -gd.exponent) * 4.0 / 3.0 * kPi * eps * eps * eps;
  CHECK(rel(green_measure_of_ball(gd, far, c, eps), approx) < 1e-4);
  // Monotone in the radius.
  CHECK(green_measure_of_ball(gd, far, c, 1.0) < green_measure_of_ball(gd, far, c, 1.5));
}

TEST_CASE("continuity bound") {
  for (const ModelParams& p : {ModelParams{0.5, 1.5, 3}, ModelParams{0.8, 1.2, 2}, ModelParams{1.0, 1.0, 3}}) {
    const auto gd = make_green_density(p);
    const double k = continuity_constant(gd);
    const std::vector<double> x(p.dim, 0.3);
    for (double s : {0.05, 0.5, 5.0, 50.0}) {
      const auto g = gaussian_function(p.dim, s);
      const auto res = potential(gd, g, x);
      CHECK(std::abs(res.value) <= k * g.cl_norm());
      CHECK(res.continuity_constant == k);
      const auto b = bump_function(p.dim, s);
      CHECK(std::abs(potential(gd, b, x).value) <= k * b.cl_norm());
    }
  }
}
