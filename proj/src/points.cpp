#include "dfw/points.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dfw/errors.hpp"

namespace dfw {

void require_valid_point(PointRef x) {
  if (x.size() < 1) throw InvalidArgument("point must have at least one coordinate");
  if (!x.allFinite()) throw InvalidArgument("point has non-finite coordinates");
}

void require_same_dimension(PointRef x, PointRef y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
  }
}

Eigen::MatrixXd tensor_grid(PointRef lower, PointRef upper, int per_axis) {
  require_same_dimension(lower, upper);
  if (per_axis < 1) throw InvalidArgument("grid needs at least one point per axis");
  const Eigen::Index dim = lower.size();
  Eigen::Index total = 1;
  for (Eigen::Index a = 0; a < dim; ++a) total *= per_axis;
  Eigen::MatrixXd grid(dim, total);
  std::vector<int> index(static_cast<std::size_t>(dim), 0);
  for (Eigen::Index p = 0; p < total; ++p) {
    for (Eigen::Index a = 0; a < dim; ++a) {
      const int i = index[static_cast<std::size_t>(a)];
      if (per_axis == 1) {
        grid(a, p) = 0.5 * (lower[a] + upper[a]);
      } else if (i == per_axis - 1) {
        grid(a, p) = upper[a];
      } else {
        grid(a, p) = lower[a] + (upper[a] - lower[a]) * i / (per_axis - 1);
      }
    }
    for (Eigen::Index a = 0; a < dim; ++a) {
      if (++index[static_cast<std::size_t>(a)] < per_axis) break;
      index[static_cast<std::size_t>(a)] = 0;
    }
  }
  return grid;
}

int default_samples_per_axis(int dim) {
  if (dim <= 1) return 1001;
  if (dim == 2) return 101;
  return 21;
}

double min_pairwise_distance(const Eigen::MatrixXd& coords) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < coords.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < coords.cols(); ++j) {
      best = std::min(best, (coords.col(i) - coords.col(j)).norm());
    }
  }
  return best;
}

NodeSet::NodeSet(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
  if (coords_.cols() < 1) throw InvalidArgument("node set must contain at least one point");
  if (coords_.rows() < 1) throw InvalidArgument("node set points must have dimension >= 1");
  if (!coords_.allFinite()) throw InvalidArgument("node set contains non-finite coordinates");
  if (!(min_pairwise_distance(coords_) > 0.0)) {
    throw InvalidArgument("node set contains coincident points");
  }
}

NodeSet NodeSet::on_line(const std::vector<double>& xs) {
  Eigen::MatrixXd c(1, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) c(0, static_cast<Eigen::Index>(i)) = xs[i];
  return NodeSet(std::move(c));
}

NodeSet NodeSet::from_points(const std::vector<Point>& points) {
  if (points.empty()) throw InvalidArgument("node set must contain at least one point");
  Eigen::MatrixXd c(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_dimension(points.front(), points[i]);
    c.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return NodeSet(std::move(c));
}

double NodeSet::min_separation() const { return min_pairwise_distance(coords_); }

NodeSet NodeSet::translated(PointRef shift) const {
  require_same_dimension(shift, coords_.col(0));
  Eigen::MatrixXd moved = coords_.colwise() + shift;
  return NodeSet(std::move(moved));
}

}  // namespace dfw
