#include "dfw/distance.hpp"

#include <cmath>

#include "dfw/errors.hpp"

namespace dfw {

double general_distance(PointRef x, PointRef y, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("distance order s must be finite and > 0");
  require_valid_point(x);
  require_valid_point(y);
  require_same_dimension(x, y);
  if (s == 2.0) return (x - y).norm();
  // Scale by the largest component so that small s does not underflow.
  double scale = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) scale = std::max(scale, std::abs(x[i] - y[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i] - y[i]) / scale, s);
  return scale * std::pow(sum, 1.0 / s);
}

AnisotropyTensor::AnisotropyTensor(Eigen::MatrixXd kappa) : kappa_(std::move(kappa)) {
  if (kappa_.rows() < 1 || kappa_.rows() != kappa_.cols()) {
    throw InvalidArgument("anisotropy tensor must be a nonempty square matrix");
  }
  if (!kappa_.allFinite()) throw InvalidArgument("anisotropy tensor has non-finite entries");
  for (Eigen::Index i = 0; i < kappa_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < kappa_.cols(); ++j) {
      if (kappa_(i, j) != kappa_(j, i)) throw InvalidArgument("anisotropy tensor is not symmetric");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(kappa_);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("anisotropy tensor is not positive definite");
  }
  factor_ = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < factor_.rows(); ++i) {
    if (!(factor_(i, i) > 0.0)) throw InvalidArgument("anisotropy tensor is not positive definite");
    log_det += 2.0 * std::log(factor_(i, i));
  }
  determinant_ = std::exp(log_det);
  jacobian_scale_ = std::exp(-0.5 * log_det);
  identity_ = kappa_.isIdentity(0.0);
  if (identity_) {
    determinant_ = 1.0;
    jacobian_scale_ = 1.0;
  }
}

AnisotropyTensor AnisotropyTensor::identity(int n) {
  if (n < 1) throw InvalidArgument("tensor dimension must be >= 1");
  return AnisotropyTensor(Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd AnisotropyTensor::whiten(PointRef d) const {
  if (d.size() != kappa_.rows()) throw InvalidArgument("tensor/point dimension mismatch");
  if (identity_) return d;
  return factor_.triangularView<Eigen::Lower>().solve(d);
}

double geodesic_distance(PointRef x, PointRef y, const AnisotropyTensor& kappa) {
  require_valid_point(x);
  require_valid_point(y);
  require_same_dimension(x, y);
  const Eigen::VectorXd d = x - y;
  const Eigen::VectorXd z = kappa.whiten(d);
  const double r2 = z.squaredNorm();
  if (!(r2 > 0.0) && !d.isZero(0.0)) {
    throw InvalidArgument("geodesic quadratic form is not positive; corrupted tensor");
  }
  return std::sqrt(r2);
}

}  // namespace dfw
