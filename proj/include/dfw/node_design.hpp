#pragma once

#include <cstdint>
#include <vector>

#include "dfw/points.hpp"

namespace dfw {

/// Axis-aligned box; lower < upper componentwise.
class DomainBox {
 public:
  DomainBox(Eigen::VectorXd lower, Eigen::VectorXd upper);

  static DomainBox interval(double a, double b);

  int dim() const noexcept { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }
  bool contains(PointRef x) const;

  /// Dense grid with `per_axis` samples per axis, endpoints included.
  Eigen::MatrixXd grid(int per_axis) const;
  /// True when x lies within `fraction` of the width of some face.
  bool in_boundary_band(PointRef x, double fraction = 0.2) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// w(x) = prod_k |x - x_k|
double omega(PointRef x, const NodeSet& nodes);

/// w sampled on a dense grid.
struct OmegaProfile {
  Eigen::MatrixXd sample_points;
  Eigen::VectorXd w_values;
};

OmegaProfile omega_profile(const NodeSet& nodes, const DomainBox& domain, int samples_per_axis);

/// Zeros of the degree-M Chebyshev polynomial mapped to [a, b], ascending.
NodeSet chebyshev_nodes(int count, double a, double b);
/// `count` equally spaced nodes on [a, b], endpoints included (the midpoint when count = 1).
NodeSet uniform_nodes(int count, double a, double b);

struct OmegaMaximum {
  double value = 0.0;
  Point location;
};

/// Grid maximum of w followed by a golden-section polish of each axis
/// around the best grid point.
OmegaMaximum locate_max_omega(const NodeSet& nodes, const DomainBox& domain, int samples_per_axis);
double max_omega(const NodeSet& nodes, const DomainBox& domain, int samples_per_axis);

struct MinMaxResult {
  NodeSet nodes;
  /// Incumbent max_omega after each iteration; entry 0 is the initial layout.
  std::vector<double> trace;
};

/// Seeded local search for the node layout minimizing max_omega. Each
/// iteration tries, for every node, a line search toward the current
/// maximizer and one joint random perturbation; only strict improvements are
/// accepted, so the trace is non-increasing.
MinMaxResult optimize_minmax(const NodeSet& initial, const DomainBox& domain, int iterations, std::uint64_t seed,
                             int samples_per_axis = 0);

/// 2-norm condition number estimate of a square matrix (+inf when singular).
double condition_estimate(const Eigen::MatrixXd& a);

}  // namespace dfw
