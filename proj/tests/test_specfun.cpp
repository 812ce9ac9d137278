#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "ggbm/errors.hpp"
#include "ggbm/specfun.hpp"

using namespace ggbm;

namespace {

// M_{1/3}(tau) = 3^{2/3} Ai(tau / 3^{1/3}).
double m_third(double tau) { return std::cbrt(9.0) * boost::math::airy_ai(tau / std::cbrt(3.0)); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gamma function against boost") {
  for (double x : {0.1, 0.5, 1.0 / 3.0, 1.0, 2.5, 7.0, 20.5, 100.3, -0.5, -2.5, -7.3})
    CHECK(rel(gamma_function(x), boost::math::tgamma(x)) < 2e-14);
  CHECK(gamma_function(5.0) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_function(0.0), DomainError);
  CHECK_THROWS_AS(gamma_function(-3.0), DomainError);
}

TEST_CASE("mittag-leffler closed forms") {
  for (double z : {0.0, -0.3, -1.0, -7.5, -40.0}) CHECK(mittag_leffler(1.0, z).value == std::exp(z));
  // E_{1/2}(-x) = exp(x^2) erfc(x).
  for (double x : {0.0, 0.1, 0.7, 1.5, 3.0, 6.0, 9.5}) {
    const double exact = std::exp(x * x) * boost::math::erfc(x);
    CHECK(rel(mittag_leffler(0.5, -x).value, exact) < 1e-12);
  }
  CHECK_THROWS_AS(mittag_leffler(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(mittag_leffler(1.5, -1.0), DomainError);
}

TEST_CASE("mittag-leffler against long double series") {
  for (double beta : {0.2, 0.45, 0.8, 0.95})
    for (double z : {-0.05, -0.4, -1.0}) {
      long double sum = 0, term = 1;
      for (int n = 0; n < 200; ++n) {
        sum += term / std::tgamma(static_cast<long double>(beta) * n + 1);
        term *= z;
      }
      CHECK(rel(mittag_leffler(beta, z).value, static_cast<double>(sum)) < 1e-13);
    }
}

TEST_CASE("mittag-leffler is the laplace transform of the airy density") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double s : {0.05, 0.5, 2.0, 10.0, 60.0}) {
    const double oracle = integrator.integrate([s](double t) { return std::exp(-s * t) * m_third(t); });
    CHECK(rel(mittag_leffler(1.0 / 3.0, -s).value, oracle) < 1e-10);
  }
}

TEST_CASE("m-wright special cases") {
  for (double tau : {0.0, 0.2, 1.0, 3.0, 6.0, 10.0})
    CHECK(std::abs(m_wright(0.5, tau).value - std::exp(-tau * tau / 4.0) / std::sqrt(std::numbers::pi)) < 1e-14);
  const MWright m(1.0 / 3.0);
  for (double tau = 0.0; tau < m.reliable_limit(); tau += 0.37) {
    const auto r = m(tau);
    CHECK(std::abs(r.value - m_third(tau)) < 1e-13);
    CHECK(r.est_abs_error < 1e-13);
  }
  CHECK(m(0.0).value == doctest::Approx(1.0 / boost::math::tgamma(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("m-wright domain") {
  CHECK_THROWS_AS(MWright(0.0), DomainError);
  CHECK_THROWS_AS(MWright(0.97), DomainError);
  const MWright m(0.7);
  CHECK(m.reliable_limit() > 4.0);
  CHECK_THROWS_AS(m(m.reliable_limit() * 1.5), ConvergenceError);
  CHECK_THROWS_AS(m(-0.1), DomainError);
  CHECK(m.tail_mass_bound(m.reliable_limit()) < 1e-10);
}

TEST_CASE("m-wright integrates to one") {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double beta : {0.25, 0.5, 0.75, 0.9}) {
    const MWright m(beta);
    const double mass = integrator.integrate([&](double t) { return m(t).value; }, 0.0, m.reliable_limit());
    CHECK(std::abs(mass - 1.0) < 1e-9 + m.tail_mass_bound(m.reliable_limit()));
  }
}

TEST_CASE("generalized moments") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double delta : {-0.75, -0.5, 0.3, 1.0, 2.5}) {
    const double oracle = integrator.integrate([delta](double t) { return std::pow(t, delta) * m_third(t); });
    CHECK(rel(m_wright_moment(1.0 / 3.0, delta), oracle) < 1e-8);
  }
  CHECK(m_wright_moment(0.5, 1.0) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(m_wright_moment(1.0, -3.0) == 1.0);
  CHECK(m_wright_moment(0.6, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(m_wright_moment(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(m_wright_moment(0.5, -2.5), DomainError);
}

TEST_CASE("time kernel constant against quadrature") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double alpha : {0.9, 1.3, 2.0})
    for (int d : {3, 5}) {
      const double oracle = integrator.integrate([&](double t) {
        const double ta = std::pow(t, alpha);
        if (ta == 0.0) return 0.0;
        return std::exp(-0.5 * d * std::log(2.0 * std::numbers::pi * ta) - 0.5 / ta);
      });
      CHECK(rel(time_kernel_constant(alpha, d), oracle) < 1e-9);
    }
  CHECK_THROWS_AS(time_kernel_constant(0.8, 2), DomainError);
}

TEST_CASE("green constant") {
  CHECK(std::abs(green_constant({1.0, 1.0, 3}) - 1.0 / (2.0 * std::numbers::pi)) < 1e-15);
  CHECK(rel(green_constant({1.0, 1.0, 4}), 1.0 / (2.0 * std::numbers::pi * std::numbers::pi)) < 1e-14);
  const ModelParams p{0.5, 1.5, 3};
  CHECK(rel(green_constant(p), time_kernel_constant(1.5, 3) * m_wright_moment(0.5, -1.0 / 1.5)) < 1e-15);
  CHECK_THROWS_AS(green_constant({0.5, 1.0, 3}), DomainError);
  CHECK_THROWS_AS(green_constant({0.5, 1.5, 1}), DomainError);
}
