#pragma once

#include <functional>
#include <span>

namespace ggbm::quad {

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 15-point Gauss-Kronrod on [a, b]. The rule never samples
// the endpoints, so integrable endpoint singularities are tolerated.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

// Same, over the union of consecutive subintervals [p0,p1], [p1,p2], ...
// Breakpoints should sit on kinks or peaks of the integrand.
Result integrate(const Integrand& f, std::span<const double> breakpoints,
                 const Options& opts = {});

// Integral over [a, inf) through x = a + u / (1 - u).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::span<double> nodes, std::span<double> weights);

}  // namespace ggbm::quad
