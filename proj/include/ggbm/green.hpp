#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ggbm/params.hpp"

namespace ggbm {

enum class TestFunctionKind { Gaussian, Bump, Custom };

/// A continuous, bounded, integrable f : R^d -> R together with its norms,
/// i.e. the data that certifies membership in CL(R^d) with
/// ||f||_CL = ||f||_inf + ||f||_1.
///
/// Radial kinds are profile(|y - center|). Every function also carries
/// tail_l1(R), an upper bound on the L1 mass of f outside the ball of radius R
/// around `center` (the origin for custom functions); potential() uses it to
/// certify its truncation error.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::Custom;
  int dim = 1;
  double scale = 1.0;  // sigma for Gaussian, support radius for Bump
  std::vector<double> center;
  double sup_norm = 0.0;
  double l1_norm = 0.0;
  std::function<double(double)> profile;                    // radial kinds only
  std::function<double(std::span<const double>)> custom;   // custom kind only
  std::function<double(double)> tail_l1;

  double operator()(std::span<const double> y) const;
  double cl_norm() const { return sup_norm + l1_norm; }
  bool is_radial() const { return kind != TestFunctionKind::Custom; }
  /// g(y) = f(y + h).
  TestFunction shifted(std::span<const double> h) const;
  std::string kind_name() const;
};

/// exp(-|y - c|^2 / (2 sigma^2)); sup 1, L1 (2 pi sigma^2)^{d/2}.
TestFunction gaussian_function(int dim, double sigma, std::vector<double> center = {});

/// Smooth bump exp(1 - 1/(1 - |y - c|^2 / r^2)) on |y - c| < r, zero outside; sup 1.
TestFunction bump_function(int dim, double radius, std::vector<double> center = {});

TestFunction custom_function(int dim, std::function<double(std::span<const double>)> f,
                             double sup_norm, double l1_norm, std::function<double(double)> tail_l1);

/// Surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(int dim);

/// Density D / |x - y|^{d - 2/alpha} of the Green measure.
struct GreenDensity {
  ModelParams params;
  double constant = 0.0;  // D = green_constant(params)
  double exponent = 0.0;  // d - 2/alpha, in (0, d)
};

/// Throws DomainError when the Green measure does not exist for params.
GreenDensity make_green_density(const ModelParams& params);

double green_density_at(const GreenDensity& gd, std::span<const double> x, std::span<const double> y);

/// int_0^inf (2 pi t^alpha tau)^{-d/2} exp(-r^2 / (2 t^alpha tau)) dt in closed
/// form: C(alpha, d) tau^{-1/alpha} r^{2/alpha - d}. Requires d alpha > 2.
double time_integral_kernel(double alpha, int dim, double tau, double r);

/// Constant K with |V(f, x)| <= K ||f||_CL for every f in CL(R^d): splitting
/// the kernel at |y| = 1 gives K = D max(omega_{d-1} alpha / 2, 1).
double continuity_constant(const GreenDensity& gd);

struct RadialPotentialSpec {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  /// Truncation radius is grown until D R^{2/alpha-d} tail_l1 falls below
  /// this fraction of K ||f||_CL.
  double tail_fraction = 1e-13;
  /// Gauss-Legendre nodes per polar angle for non-radial f.
  int angular_nodes = 24;
};

struct PotentialResult {
  double value = 0.0;
  double abs_error = 0.0;     // quadrature error estimate + truncation bound
  double tail_bound = 0.0;    // truncation part alone
  double radius = 0.0;        // truncation radius R
  double continuity_constant = 0.0;
  double cl_norm = 0.0;
};

/// Green potential V(f, x) = D int f(x + y) |y|^{2/alpha - d} dy.
///
/// The radial integral is taken in u = r^{2/alpha}, which maps the measure
/// r^{2/alpha - 1} dr to (alpha/2) du and removes the singularity at y = 0.
/// For radial f the angular average reduces to one polar integral; other f
/// use a hyperspherical product rule.
PotentialResult potential(const GreenDensity& gd, const TestFunction& f, std::span<const double> x,
                          const RadialPotentialSpec& spec = {});

/// Green measure of the ball B(center, r) seen from x: the expected time the
/// process started at x spends in the ball. When x = center this is
/// D omega_{d-1} (alpha/2) r^{2/alpha}; otherwise the spherical-shell fraction
/// inside the ball is integrated radially.
double green_measure_of_ball(const GreenDensity& gd, std::span<const double> x,
                             std::span<const double> center, double r);

}  // namespace ggbm
