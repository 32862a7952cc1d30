#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dfw {

using Point = Eigen::VectorXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

/// Throws InvalidArgument unless the point is nonempty with finite coordinates.
void require_valid_point(PointRef x);

/// Throws InvalidArgument when the two points live in different dimensions.
void require_same_dimension(PointRef x, PointRef y);

/// Ordered, pairwise-distinct set of M >= 1 points, stored one point per column.
class NodeSet {
 public:
  explicit NodeSet(Eigen::MatrixXd coords);

  /// Points on the real line.
  static NodeSet on_line(const std::vector<double>& xs);
  static NodeSet from_points(const std::vector<Point>& points);

  Eigen::Index size() const noexcept { return coords_.cols(); }
  int dim() const noexcept { return static_cast<int>(coords_.rows()); }

  auto point(Eigen::Index i) const { return coords_.col(i); }
  const Eigen::MatrixXd& coords() const noexcept { return coords_; }

  double min_separation() const;

  NodeSet translated(PointRef shift) const;

 private:
  Eigen::MatrixXd coords_;
};

/// Tensor-product grid over the box [lower, upper] with `per_axis` points on
/// each axis (endpoints included), one point per column, first axis fastest.
Eigen::MatrixXd tensor_grid(PointRef lower, PointRef upper, int per_axis);

/// Default dense sampling density: 1001 points in 1D, 101 per axis in 2D, 21 beyond.
int default_samples_per_axis(int dim);

/// Smallest pairwise Euclidean distance between the columns of `coords`
/// (+infinity for fewer than two columns).
double min_pairwise_distance(const Eigen::MatrixXd& coords);

}  // namespace dfw
