#pragma once

#include <functional>
#include <vector>

#include "dfw/points.hpp"

namespace dfw {

/// Samples of a field on a regular grid, row-major (last axis fastest).
/// Grid point i sits at i * spacing; a periodic grid covers [0, period).
class GridFunction {
 public:
  GridFunction(std::vector<int> shape, std::vector<double> period, std::vector<double> values);

  /// Samples f at the grid points of a box of the given period.
  static GridFunction sample(std::vector<int> shape, std::vector<double> period,
                             const std::function<double(PointRef)>& f);

  int dims() const noexcept { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const noexcept { return shape_; }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  const std::vector<double>& period() const noexcept { return period_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Coordinates of the flat index p.
  Point point(std::size_t p) const;
  /// Multi-index of the flat index p.
  std::vector<int> index(std::size_t p) const;

  GridFunction with_values(std::vector<double> values) const;
  double mean() const;
  double max_abs() const;

 private:
  std::vector<int> shape_;
  std::vector<double> spacing_;
  std::vector<double> period_;
  std::vector<double> values_;
};

/// Spectral fractional Laplacian: mode kappa is scaled by |kappa|^y, 0 < y <= 2.
GridFunction fractional_laplacian(const GridFunction& f, double y);

enum class RieszMethod { Spectral, Direct };

/// Riesz potential of order s.
///   Spectral: periodic analogue, mode kappa scaled by |kappa|^{-s}, zero mode
///   dropped; f must have zero mean and 0 < s < 2.
///   Direct: quadrature of the whole-space integral for a compactly
///   supported f (n = 1 or 2, 0 < s < n), piecewise (bi)linear f with exact
///   moments on the cells touching the evaluation point.
GridFunction riesz_potential(const GridFunction& f, double s, RieszMethod method);

/// Gamma((n-s)/2) / (pi^{n/2} 2^s Gamma(s/2))
double riesz_prefactor(int n, double s);

struct RadialSamples {
  std::vector<double> abscissae;  // strictly increasing, starting at 0
  std::vector<double> values;

  void validate() const;
};

/// f(x) = int_0^x g(t) (x - t)^{beta - 1} dt, product integration over a
/// piecewise linear g.
RadialSamples abel_forward(const RadialSamples& g, double beta);

/// g(t) = sin(pi beta)/pi * d/dt int_0^t f(x) (t - x)^{-beta} dx; needs f(0) = 0.
RadialSamples abel_backward(const RadialSamples& f, double beta);

/// A function on R^n vanishing outside the ball (center, radius).
struct SupportedFunction {
  std::function<double(PointRef)> f;
  Point center;
  double radius = 0.0;
};

struct RadialQuadratureSpec {
  int annuli = 16;
  int radial_points = 64;
  /// Trapezoid points in the angle (n = 2) or azimuth (n = 3).
  int angular_points = 128;
  /// Gauss-Legendre points in cos(polar angle), n = 3 only.
  int polar_points = 64;
};

/// 2 Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))
double weyl_prefactor(int n);
/// pi^{n/2} / Gamma(n/2)
double radon_weyl_ratio(int n);

/// Weyl transform at xi with shift gamma, n in {2, 3}.
double weyl_transform(const SupportedFunction& f, PointRef xi, double gamma, int n,
                      const RadialQuadratureSpec& quad = {});
/// radon_weyl_ratio(n) * weyl_transform(...)
double radon_dfw(const SupportedFunction& f, PointRef xi, double gamma, int n, const RadialQuadratureSpec& quad = {});
/// The same integral normalized by the unit-sphere area 2 pi^{n/2} / Gamma(n/2).
double radon_dfw_surface_form(const SupportedFunction& f, PointRef xi, double gamma, int n,
                              const RadialQuadratureSpec& quad = {});

/// radon_dfw with gamma = 0; n = 3 only.
double laplace_potential_dfw(const SupportedFunction& f, PointRef xi, int n, const RadialQuadratureSpec& quad = {});
/// 1/(n-2) int f / u*(|xi - x|) dx with u*(r) = 1 / ((n-2) |S^{n-1}| r^{n-2}).
double laplace_potential_second_form(const SupportedFunction& f, PointRef xi, int n,
                                     const RadialQuadratureSpec& quad = {});

/// Periodic convolution with the Poisson kernel of height q, sampled with
/// minimum-image distances and normalized to unit discrete mass.
GridFunction poisson_extension(const GridFunction& f, double q);

}  // namespace dfw
