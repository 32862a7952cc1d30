#include "dfw/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dfw/errors.hpp"

namespace dfw {

namespace {

void require_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be finite and >= 0");
}

struct FamilyName {
  KernelFamily family;
  std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {KernelFamily::LaplaceFundamental, "LaplaceFundamental"},
    {KernelFamily::MQ, "MQ"},
    {KernelFamily::InverseMQ, "InverseMQ"},
    {KernelFamily::MQTPS, "MQ-TPS"},
    {KernelFamily::PoissonKernel, "PoissonKernel"},
    {KernelFamily::Gaussian, "Gaussian"},
    {KernelFamily::PowerDistance, "PowerDistance"},
};

}  // namespace

std::string_view family_name(KernelFamily family) {
  for (const auto& entry : kFamilyNames) {
    if (entry.family == family) return entry.name;
  }
  return "unknown";
}

KernelFamily parse_family(std::string_view name) {
  for (const auto& entry : kFamilyNames) {
    if (entry.name == name) return entry.family;
  }
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::laplace(int n, int m) {
  KernelSpec s;
  s.family = KernelFamily::LaplaceFundamental;
  s.n = n;
  s.m = m;
  return s;
}

KernelSpec KernelSpec::mq(double c) {
  KernelSpec s;
  s.family = KernelFamily::MQ;
  s.shape = c;
  return s;
}

KernelSpec KernelSpec::inverse_mq(double c) {
  KernelSpec s;
  s.family = KernelFamily::InverseMQ;
  s.shape = c;
  return s;
}

KernelSpec KernelSpec::mq_tps(int n, int m, double c) {
  KernelSpec s;
  s.family = KernelFamily::MQTPS;
  s.n = n;
  s.m = m;
  s.shape = c;
  return s;
}

KernelSpec KernelSpec::poisson(int n, double q) {
  KernelSpec s;
  s.family = KernelFamily::PoissonKernel;
  s.n = n;
  s.shape = q;
  return s;
}

KernelSpec KernelSpec::gaussian(double alpha) {
  KernelSpec s;
  s.family = KernelFamily::Gaussian;
  s.shape = alpha;
  return s;
}

KernelSpec KernelSpec::power_distance(double p) {
  KernelSpec s;
  s.family = KernelFamily::PowerDistance;
  s.power = p;
  return s;
}

KernelSpec KernelSpec::with_anisotropy(AnisotropyTensor kappa) const {
  KernelSpec s = *this;
  s.n = kappa.dim();
  s.anisotropy = std::move(kappa);
  return s;
}

void KernelSpec::validate() const {
  if (n < 1) throw InvalidArgument("kernel dimension n must be >= 1");
  switch (family) {
    case KernelFamily::LaplaceFundamental:
      if (m < 0) throw InvalidArgument("Laplace order m must be >= 0");
      break;
    case KernelFamily::MQ:
    case KernelFamily::InverseMQ:
      if (!(shape >= 0.0) || !std::isfinite(shape)) throw InvalidArgument("MQ shape c must be >= 0");
      break;
    case KernelFamily::MQTPS:
      if (m < 0) throw InvalidArgument("MQ-TPS order m must be >= 0");
      if (n != 2 && n != 3) throw InvalidArgument("MQ-TPS is defined for n = 2 or 3");
      if (!(shape >= 0.0) || !std::isfinite(shape)) throw InvalidArgument("MQ-TPS shape c must be >= 0");
      break;
    case KernelFamily::PoissonKernel:
      if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidArgument("Poisson height q must be > 0");
      break;
    case KernelFamily::Gaussian:
      if (!(shape > 0.0) || !std::isfinite(shape)) throw InvalidArgument("Gaussian alpha must be > 0");
      break;
    case KernelFamily::PowerDistance:
      if (!std::isfinite(power)) throw InvalidArgument("power exponent must be finite");
      break;
  }
  if (anisotropy && anisotropy->dim() != n) {
    throw InvalidArgument("anisotropy tensor dimension must equal the kernel dimension n");
  }
}

double laplace_fundamental_profile(double r, int n, int m) {
  require_radius(r);
  if (n < 1) throw InvalidArgument("dimension n must be >= 1");
  if (m < 0) throw InvalidArgument("Laplace order m must be >= 0");
  const int p = 2 * m + 2 - n;
  const bool with_log = p >= 0 && p % 2 == 0;
  if (r == 0.0) {
    if (p > 0) return 0.0;
    throw SingularityError("Laplace fundamental profile is singular at r = 0 (n=" + std::to_string(n) +
                           ", m=" + std::to_string(m) + ")");
  }
  const double rp = std::pow(r, p);
  return with_log ? rp * std::log(r) : rp;
}

double mq_profile(double r, double c, MqVariant variant, int m, int n) {
  require_radius(r);
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("MQ shape c must be >= 0");
  switch (variant) {
    case MqVariant::Multiquadric:
      return std::hypot(r, c);
    case MqVariant::InverseMultiquadric: {
      const double u = std::hypot(r, c);
      if (u == 0.0) throw SingularityError("inverse MQ: division by zero at r = c = 0");
      return 1.0 / u;
    }
    case MqVariant::ThinPlate: {
      if (m < 0) throw InvalidArgument("MQ-TPS order m must be >= 0");
      const double s = r * r + c * c;
      if (n == 2) {
        if (s == 0.0) throw SingularityError("MQ-TPS: log of zero at r = c = 0");
        return std::pow(s, m) * std::log(s);
      }
      if (n == 3) {
        const double e = 0.5 * (2 * m - 1);
        if (s == 0.0) {
          if (e > 0.0) return 0.0;
          throw SingularityError("MQ-TPS (n=3, m=0) is singular at r = c = 0");
        }
        return std::pow(s, e);
      }
      throw InvalidArgument("MQ-TPS is defined for n = 2 or 3");
    }
  }
  throw InvalidArgument("unknown MQ variant");
}

double poisson_normalization(int n) {
  if (n < 1) throw InvalidArgument("dimension n must be >= 1");
  const double h = 0.5 * (n + 1);
  return std::tgamma(h) / std::pow(std::numbers::pi, h);
}

double poisson_kernel_profile(double r, double q, int n) {
  require_radius(r);
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidArgument("Poisson height q must be > 0");
  return poisson_normalization(n) * q / std::pow(r * r + q * q, 0.5 * (n + 1));
}

double gaussian_profile(double r, double alpha) {
  require_radius(r);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("Gaussian alpha must be > 0");
  const double t = r / alpha;
  return std::exp(-t * t);
}

double power_profile(double r, double power) {
  require_radius(r);
  if (r == 0.0) {
    if (power > 0.0) return 0.0;
    if (power == 0.0) return 1.0;
    throw SingularityError("negative power of the distance is singular at r = 0");
  }
  return std::pow(r, power);
}

double radial_profile(const KernelSpec& spec, double r) {
  switch (spec.family) {
    case KernelFamily::LaplaceFundamental:
      return laplace_fundamental_profile(r, spec.n, spec.m);
    case KernelFamily::MQ:
      return mq_profile(r, spec.shape, MqVariant::Multiquadric);
    case KernelFamily::InverseMQ:
      return mq_profile(r, spec.shape, MqVariant::InverseMultiquadric);
    case KernelFamily::MQTPS:
      return mq_profile(r, spec.shape, MqVariant::ThinPlate, spec.m, spec.n);
    case KernelFamily::PoissonKernel:
      return poisson_kernel_profile(r, spec.shape, spec.n);
    case KernelFamily::Gaussian:
      return gaussian_profile(r, spec.shape);
    case KernelFamily::PowerDistance:
      return power_profile(r, spec.power);
  }
  throw InvalidArgument("unknown kernel family");
}

double kernel_distance(const KernelSpec& spec, PointRef x, PointRef center) {
  require_valid_point(x);
  require_valid_point(center);
  require_same_dimension(x, center);
  if (spec.anisotropy) return geodesic_distance(x, center, *spec.anisotropy);
  return (x - center).norm();
}

double eval_kernel(const KernelSpec& spec, PointRef x, PointRef center) {
  spec.validate();
  const double r = kernel_distance(spec, x, center);
  const double value = radial_profile(spec, r);
  return spec.anisotropy ? spec.anisotropy->jacobian_scale() * value : value;
}

double kernel_normal_derivative(const KernelSpec& spec, PointRef x, PointRef center, PointRef normal) {
  require_valid_point(x);
  require_valid_point(center);
  require_same_dimension(x, center);
  require_same_dimension(x, normal);
  if (std::abs(normal.norm() - 1.0) > 1e-12) throw InvalidArgument("normal must be a unit vector");
  const KernelDifferentiator diff(spec);
  return diff.directional(x - center, normal);
}

namespace detail {

SquaredRadialForm SquaredRadialForm::of(const KernelSpec& spec) {
  SquaredRadialForm f;
  switch (spec.family) {
    case KernelFamily::LaplaceFundamental: {
      const int p = 2 * spec.m + 2 - spec.n;
      f.exponent = 0.5 * p;
      if (p >= 0 && p % 2 == 0) {
        // r^p ln r = (1/2) s^{p/2} ln s
        f.log = true;
        f.coef = 0.5;
      }
      break;
    }
    case KernelFamily::MQ:
      f.shift = spec.shape * spec.shape;
      f.exponent = 0.5;
      break;
    case KernelFamily::InverseMQ:
      f.shift = spec.shape * spec.shape;
      f.exponent = -0.5;
      break;
    case KernelFamily::MQTPS:
      f.shift = spec.shape * spec.shape;
      if (spec.n == 2) {
        f.exponent = spec.m;
        f.log = true;
      } else {
        f.exponent = 0.5 * (2 * spec.m - 1);
      }
      break;
    case KernelFamily::PoissonKernel:
      f.coef = poisson_normalization(spec.n) * spec.shape;
      f.shift = spec.shape * spec.shape;
      f.exponent = -0.5 * (spec.n + 1);
      break;
    case KernelFamily::Gaussian:
      f.exponential = true;
      f.decay = 1.0 / (spec.shape * spec.shape);
      break;
    case KernelFamily::PowerDistance:
      f.exponent = 0.5 * spec.power;
      break;
  }
  return f;
}

namespace {

// d^k/du^k [u^a (ln u)^L] = u^{a-k} (lead * ln u + tail) for L = 1,
// and lead * u^{a-k} for L = 0.
struct PowerCoefficients {
  double lead = 1.0;
  double tail = 0.0;
};

PowerCoefficients power_coefficients(double a, int k) {
  PowerCoefficients c;
  for (int i = 0; i < k; ++i) {
    c.tail = (a - i) * c.tail + c.lead;
    c.lead = (a - i) * c.lead;
  }
  return c;
}

}  // namespace

double SquaredRadialForm::derivative(int k, double s) const {
  if (exponential) {
    return coef * std::pow(-decay, k) * std::exp(-decay * s);
  }
  const double u = s + shift;
  const PowerCoefficients c = power_coefficients(exponent, k);
  if (!log) {
    if (c.lead == 0.0) return 0.0;
    return coef * c.lead * std::pow(u, exponent - k);
  }
  if (c.lead == 0.0 && c.tail == 0.0) return 0.0;
  return coef * std::pow(u, exponent - k) * (c.lead * std::log(u) + c.tail);
}

std::optional<double> SquaredRadialForm::limit_at_zero(int k, double e) const {
  if (regular_at_zero()) {
    if (e > 0.0) return 0.0;
    return derivative(k, 0.0);
  }
  const PowerCoefficients c = power_coefficients(exponent, k);
  const double ex = exponent - k + e;
  if (!log) {
    if (c.lead == 0.0 || ex > 0.0) return 0.0;
    if (ex == 0.0) return coef * c.lead;
    return std::nullopt;
  }
  if (ex > 0.0) return 0.0;
  if (c.lead != 0.0) return std::nullopt;
  if (ex == 0.0) return coef * c.tail;
  if (c.tail == 0.0) return 0.0;
  return std::nullopt;
}

}  // namespace detail

KernelDifferentiator::KernelDifferentiator(KernelSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  form_ = detail::SquaredRadialForm::of(spec_);
  if (spec_.anisotropy) scale_ = spec_.anisotropy->jacobian_scale();
}

Eigen::VectorXd KernelDifferentiator::whiten(PointRef d) const {
  if (spec_.anisotropy) return spec_.anisotropy->whiten(d);
  return d;
}

void KernelDifferentiator::require_isotropic(const char* op) const {
  if (spec_.anisotropy) {
    throw InvalidArgument(std::string(op) + " is only available for isotropic kernels");
  }
}

double KernelDifferentiator::limit_or_throw(int k, double e, const char* what) const {
  const auto lim = form_.limit_at_zero(k, e);
  if (!lim) {
    throw SmoothnessError(std::string(family_name(spec_.family)) + " kernel is not smooth enough at r = 0 for " +
                          what);
  }
  return *lim;
}

void KernelDifferentiator::require_vanishing(int k, double e, const char* what) const {
  if (limit_or_throw(k, e, what) != 0.0) {
    throw SmoothnessError(std::string(family_name(spec_.family)) + " kernel is not smooth enough at r = 0 for " +
                          what);
  }
}

double KernelDifferentiator::value(PointRef d) const {
  require_valid_point(d);
  const double r = whiten(d).norm();
  return scale_ * radial_profile(spec_, r);
}

double KernelDifferentiator::directional(PointRef d, PointRef v) const {
  require_same_dimension(d, v);
  const Eigen::VectorXd z = whiten(d);
  const double s = z.squaredNorm();
  if (s == 0.0) {
    require_vanishing(1, 0.5, "a first derivative");
    return 0.0;
  }
  const Eigen::VectorXd w = whiten(v);
  return scale_ * 2.0 * form_.derivative(1, s) * z.dot(w);
}

double KernelDifferentiator::second_directional(PointRef d, PointRef v1, PointRef v2) const {
  require_same_dimension(d, v1);
  require_same_dimension(d, v2);
  const Eigen::VectorXd z = whiten(d);
  const Eigen::VectorXd w1 = whiten(v1);
  const Eigen::VectorXd w2 = whiten(v2);
  const double s = z.squaredNorm();
  if (s == 0.0) {
    const double f1 = limit_or_throw(1, 0.0, "a second derivative");
    require_vanishing(2, 1.0, "a second derivative");
    return scale_ * 2.0 * f1 * w1.dot(w2);
  }
  return scale_ * (2.0 * form_.derivative(1, s) * w1.dot(w2) +
                   4.0 * form_.derivative(2, s) * z.dot(w1) * z.dot(w2));
}

double KernelDifferentiator::laplacian(PointRef d) const {
  require_isotropic("laplacian");
  const double dim = static_cast<double>(d.size());
  const double s = d.squaredNorm();
  if (s == 0.0) {
    const double f1 = limit_or_throw(1, 0.0, "a Laplacian");
    require_vanishing(2, 1.0, "a Laplacian");
    return 2.0 * dim * f1;
  }
  return 2.0 * dim * form_.derivative(1, s) + 4.0 * s * form_.derivative(2, s);
}

double KernelDifferentiator::laplacian_directional(PointRef d, PointRef v) const {
  require_isotropic("laplacian derivative");
  require_same_dimension(d, v);
  const double dim = static_cast<double>(d.size());
  const double s = d.squaredNorm();
  if (s == 0.0) {
    require_vanishing(2, 0.5, "a derivative of the Laplacian");
    require_vanishing(3, 1.5, "a derivative of the Laplacian");
    return 0.0;
  }
  const double g1 = (2.0 * dim + 4.0) * form_.derivative(2, s) + 4.0 * s * form_.derivative(3, s);
  return 2.0 * g1 * d.dot(v);
}

double KernelDifferentiator::bilaplacian(PointRef d) const {
  require_isotropic("bilaplacian");
  const double dim = static_cast<double>(d.size());
  const double s = d.squaredNorm();
  if (s == 0.0) {
    const double f2 = limit_or_throw(2, 0.0, "a bilaplacian");
    require_vanishing(3, 1.0, "a bilaplacian");
    require_vanishing(4, 2.0, "a bilaplacian");
    return 4.0 * dim * (dim + 2.0) * f2;
  }
  return 4.0 * dim * (dim + 2.0) * form_.derivative(2, s) + 16.0 * (dim + 2.0) * s * form_.derivative(3, s) +
         16.0 * s * s * form_.derivative(4, s);
}

}  // namespace dfw
