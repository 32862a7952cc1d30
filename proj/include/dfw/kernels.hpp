#pragma once

#include <optional>
#include <string_view>

#include "dfw/distance.hpp"
#include "dfw/points.hpp"

namespace dfw {

enum class KernelFamily {
  LaplaceFundamental,  // polyharmonic profiles of iterated Laplacians
  MQ,
  InverseMQ,
  MQTPS,               // MQ-shifted thin plate / cubic profiles
  PoissonKernel,
  Gaussian,
  PowerDistance,
};

std::string_view family_name(KernelFamily family);
/// Accepts the names produced by family_name; throws InvalidArgument otherwise.
KernelFamily parse_family(std::string_view name);

/// A kernel family plus its parameters. `shape` is c (MQ family), q (Poisson)
/// or alpha (Gaussian); `power` is the PowerDistance exponent. A present
/// anisotropy tensor selects the geodesic variant of the family.
struct KernelSpec {
  KernelFamily family = KernelFamily::MQ;
  int n = 2;
  int m = 1;
  double shape = 1.0;
  double power = 1.0;
  std::optional<AnisotropyTensor> anisotropy;

  static KernelSpec laplace(int n, int m);
  static KernelSpec mq(double c);
  static KernelSpec inverse_mq(double c);
  static KernelSpec mq_tps(int n, int m, double c);
  static KernelSpec poisson(int n, double q);
  static KernelSpec gaussian(double alpha);
  static KernelSpec power_distance(double p);

  KernelSpec with_anisotropy(AnisotropyTensor kappa) const;

  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
  bool geodesic() const noexcept { return anisotropy.has_value(); }
};

/// Unnormalized radial profile of the fundamental solution of the
/// (m+1)-fold iterated Laplacian in n dimensions: r^p, times ln r when
/// p = 2m+2-n is an even nonnegative integer.
double laplace_fundamental_profile(double r, int n, int m);

enum class MqVariant { Multiquadric, InverseMultiquadric, ThinPlate };

/// MQ-type profiles; `m` and `n` are only used by the ThinPlate variant,
/// which is (r^2+c^2)^m ln(r^2+c^2) for n = 2 and (r^2+c^2)^{(2m-1)/2} for n = 3.
double mq_profile(double r, double c, MqVariant variant, int m = 1, int n = 2);

/// Gamma((n+1)/2) / pi^{(n+1)/2}: makes the Poisson kernel integrate to one over R^n.
double poisson_normalization(int n);
double poisson_kernel_profile(double r, double q, int n);
double gaussian_profile(double r, double alpha);
double power_profile(double r, double power);

/// Family dispatch on a (Euclidean or geodesic) radius.
double radial_profile(const KernelSpec& spec, double r);

/// Euclidean distance, or geodesic distance when the spec carries a tensor.
double kernel_distance(const KernelSpec& spec, PointRef x, PointRef center);

/// Kernel value; geodesic variants carry the (det kappa)^{-1/2} prefactor.
double eval_kernel(const KernelSpec& spec, PointRef x, PointRef center);

/// Derivative of eval_kernel with respect to x along a unit `normal`.
double kernel_normal_derivative(const KernelSpec& spec, PointRef x, PointRef center, PointRef normal);

namespace detail {

// Kernel written as a function of the squared radius s = r^2:
//   power form       coef * u^a * (ln u)^{0|1},  u = s + shift
//   exponential form coef * exp(-decay * s)
struct SquaredRadialForm {
  bool exponential = false;
  double coef = 1.0;
  double shift = 0.0;
  double exponent = 0.0;
  bool log = false;
  double decay = 0.0;

  static SquaredRadialForm of(const KernelSpec& spec);

  bool regular_at_zero() const noexcept { return exponential || shift > 0.0; }
  /// k-th derivative in s; requires s > 0 unless regular_at_zero().
  double derivative(int k, double s) const;
  /// lim_{s->0+} s^e F^{(k)}(s); empty when the limit is infinite or
  /// depends on the direction of approach.
  std::optional<double> limit_at_zero(int k, double e) const;
};

}  // namespace detail

/// Derivatives of x -> K(x - center) expressed through the displacement d = x - center.
/// At d = 0 the one-sided limits are used where they exist; otherwise a
/// SmoothnessError is thrown. Laplacian-type operators are isotropic only.
class KernelDifferentiator {
 public:
  explicit KernelDifferentiator(KernelSpec spec);

  const KernelSpec& spec() const noexcept { return spec_; }

  double value(PointRef d) const;
  /// v . grad K
  double directional(PointRef d, PointRef v) const;
  /// v1^T (Hessian K) v2
  double second_directional(PointRef d, PointRef v1, PointRef v2) const;
  double laplacian(PointRef d) const;
  /// v . grad(Laplacian K)
  double laplacian_directional(PointRef d, PointRef v) const;
  double bilaplacian(PointRef d) const;

 private:
  Eigen::VectorXd whiten(PointRef d) const;
  void require_isotropic(const char* op) const;
  double limit_or_throw(int k, double e, const char* what) const;
  void require_vanishing(int k, double e, const char* what) const;

  KernelSpec spec_;
  detail::SquaredRadialForm form_;
  double scale_ = 1.0;
};

}  // namespace dfw
