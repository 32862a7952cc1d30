#pragma once

#include <Eigen/Dense>

#include "dfw/points.hpp"

namespace dfw {

/// p-norm style distance (sum_i |x_i - y_i|^s)^(1/s) for any real order s > 0.
/// For s < 1 this is a quasi-metric; s = 2 is the Euclidean distance.
double general_distance(PointRef x, PointRef y, double s);

/// Symmetric positive definite medium tensor defining a geodesic distance.
///
/// The tensor is factored once as kappa = L L^T; distances are then evaluated
/// as ||L^{-1}(x - y)||, which equals sqrt((x-y)^T kappa^{-1} (x-y)).
class AnisotropyTensor {
 public:
  /// Throws InvalidArgument unless `kappa` is square, finite, exactly symmetric
  /// and admits a Cholesky factorization.
  explicit AnisotropyTensor(Eigen::MatrixXd kappa);

  static AnisotropyTensor identity(int n);

  int dim() const noexcept { return static_cast<int>(kappa_.rows()); }
  const Eigen::MatrixXd& kappa() const noexcept { return kappa_; }
  /// Lower-triangular Cholesky factor L.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }
  double determinant() const noexcept { return determinant_; }
  /// (det kappa)^{-1/2}, the scalar prefactor of geodesic kernels.
  double jacobian_scale() const noexcept { return jacobian_scale_; }
  bool is_identity() const noexcept { return identity_; }

  /// Maps a displacement into coordinates where the geodesic distance is Euclidean.
  Eigen::VectorXd whiten(PointRef d) const;

 private:
  Eigen::MatrixXd kappa_;
  Eigen::MatrixXd factor_;
  double determinant_ = 1.0;
  double jacobian_scale_ = 1.0;
  bool identity_ = false;
};

double geodesic_distance(PointRef x, PointRef y, const AnisotropyTensor& kappa);

}  // namespace dfw
