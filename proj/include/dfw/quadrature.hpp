#pragma once

#include <vector>

namespace dfw {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Finite-difference weights for the first derivative at `x0` using the
/// stencil `xs` (any distinct abscissae); Fornberg's recursion.
std::vector<double> derivative_weights(double x0, const std::vector<double>& xs);

/// Surface area of the unit sphere in R^n, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

}  // namespace dfw
