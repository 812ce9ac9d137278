#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "ggbm/io.hpp"
#include "ggbm/quadrature.hpp"
#include "ggbm/stats.hpp"

using namespace ggbm;

TEST_CASE("adaptive quadrature against boost") {
  auto smooth = [](double x) { return std::sin(3 * x) * std::exp(-x); };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(smooth, 0.0, 4.0, 10, 1e-15);
  const auto r = quad::integrate(smooth, 0.0, 4.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - ref) < 1e-13);

  auto singular = [](double x) { return std::pow(x, -0.7) * std::cos(x); };
  const double ref2 = boost::math::quadrature::tanh_sinh<double>().integrate(singular, 0.0, 1.0);
  CHECK(std::abs(quad::integrate(singular, 0.0, 1.0).value - ref2) < 1e-9);

  auto decay = [](double x) { return 1.0 / (1.0 + x * x); };
  CHECK(std::abs(quad::integrate_to_infinity(decay, 0.0).value - std::numbers::pi / 2) < 1e-11);

  const double breaks[] = {0.0, 1.0, 2.0, 5.0};
  auto kink = [](double x) { return std::abs(x - 2.0); };
  CHECK(quad::integrate(kink, breaks).value == doctest::Approx(2.0 + 4.5).epsilon(1e-13));
}

TEST_CASE("gauss-legendre rule") {
  std::vector<double> x(12), w(12);
  quad::gauss_legendre(12, x, w);
  double s = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += w[i];
    s4 += w[i] * std::pow(x[i], 22);
  }
  CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s4 == doctest::Approx(2.0 / 23.0).epsilon(1e-14));
}

TEST_CASE("mean and standard error") {
  const std::vector<double> v = {1, 2, 3, 4};
  const MeanSe m = mean_and_se(v);
  CHECK(m.mean == 2.5);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("kolmogorov distribution and ks test") {
  CHECK(kolmogorov_survival(1.358) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  std::vector<double> a, b, c;
  for (int i = 0; i < 500; ++i) {
    a.push_back(i / 500.0);
    b.push_back((i + 0.5) / 500.0);
    c.push_back(0.3 + i / 500.0);
  }
  CHECK(ks_two_sample(a, b).p_value > 0.99);
  const KsResult shifted = ks_two_sample(a, c);
  CHECK(shifted.statistic == doctest::Approx(0.3).epsilon(1e-2));
  CHECK(shifted.p_value < 1e-6);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_number(1.0 / (2 * std::numbers::pi), 15) == "0.159154943091895");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-2.5e-20) == "-2.5e-20");
  for (double v : {std::numbers::pi, 1e300, 6.02e-23}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("path csv") {
  Path p;
  p.grid = GridSpec{1.0, 2};
  p.dim = 2;
  p.values = {0, 0, 0.5, -1, 0.25, 2};
  std::ostringstream os;
  write_path_csv(os, p);
  CHECK(os.str() == "t,x1,x2\n0,0,0\n0.5,0.5,-1\n1,0.25,2\n");
}

TEST_CASE("estimate json") {
  Estimate e;
  e.mean = 1.5;
  e.std_error = 0.1;
  e.n_paths = 10;
  e.t_max = 50;
  e.seed = 42;
  const std::vector<double> x = {0.0, 1.0};
  const auto j = to_json(e, {0.5, 1.5, 2}, gaussian_function(2, 1.0), x);
  for (const char* key : {"params", "f_descriptor", "x", "n_paths", "t_max", "mean", "std_error", "tail_bound", "seed"})
    CHECK(j.contains(key));
  CHECK(j["params"]["alpha"] == 1.5);
  CHECK(j["f_descriptor"]["kind"] == "gaussian");
  CHECK(j["x"][1] == 1.0);
}
