#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dfw/kernels.hpp"
#include "dfw/points.hpp"

namespace dfw {

/// Interior nodes, boundary nodes and their outward unit normals; every
/// matrix holds one point (or normal) per column.
class BoundarySpec {
 public:
  /// Nodes closer than this multiple of the layout diameter count as coincident.
  static constexpr double kDistinctTolerance = 1e-12;

  BoundarySpec(Eigen::MatrixXd interior, Eigen::MatrixXd boundary, Eigen::MatrixXd normals);

  int dim() const noexcept { return dim_; }
  Eigen::Index interior_count() const noexcept { return interior_.cols(); }
  Eigen::Index boundary_count() const noexcept { return boundary_.cols(); }
  const Eigen::MatrixXd& interior() const noexcept { return interior_; }
  const Eigen::MatrixXd& boundary() const noexcept { return boundary_; }
  const Eigen::MatrixXd& normals() const noexcept { return normals_; }

  /// Interior nodes followed by boundary nodes.
  Eigen::MatrixXd all_nodes() const;

 private:
  int dim_;
  Eigen::MatrixXd interior_;
  Eigen::MatrixXd boundary_;
  Eigen::MatrixXd normals_;
};

struct HermiteSystem {
  Eigen::MatrixXd matrix;
  /// max |A - A^T|
  double symmetry_defect = 0.0;
};

/// Symmetric Hermite collocation matrix with blocks ordered interior values
/// (N), boundary values (L), boundary normal derivatives (L). Neumann basis
/// functions carry a minus sign so that the matrix is symmetric.
HermiteSystem assemble_hermite(const BoundarySpec& layout, const KernelSpec& kernel);

class HermiteModel {
 public:
  HermiteModel(KernelSpec kernel, BoundarySpec layout, Eigen::VectorXd beta);

  const KernelSpec& kernel() const noexcept { return kernel_; }
  const BoundarySpec& layout() const noexcept { return layout_; }
  const Eigen::VectorXd& beta() const noexcept { return beta_; }

 private:
  KernelSpec kernel_;
  BoundarySpec layout_;
  Eigen::VectorXd beta_;
};

struct HermiteFit {
  HermiteModel model;
  /// Max violation over all N + 2L constraints.
  double max_residual = 0.0;
  double condition = 1.0;
};

HermiteFit fit_hermite(const BoundarySpec& layout, const KernelSpec& kernel, std::span<const double> interior_values,
                       std::span<const double> dirichlet_values, std::span<const double> neumann_values);

/// Value of the Hermite expansion at x.
double evaluate_hermite(const HermiteModel& model, PointRef x);
/// Derivative of the Hermite expansion at x along the unit vector `direction`.
double evaluate_hermite(const HermiteModel& model, PointRef x, PointRef direction);

enum class BoundaryOperatorKind { Value, NormalDerivative, LaplacianTrace };

struct BoundaryOperator {
  BoundaryOperatorKind kind = BoundaryOperatorKind::Value;
  /// Indices into the boundary node list where this operator is imposed.
  std::vector<Eigen::Index> nodes;
};

/// One to three boundary operators which together cover every boundary node.
class BoundaryOperatorSet {
 public:
  BoundaryOperatorSet(std::vector<BoundaryOperator> ops, Eigen::Index boundary_count);

  /// Each operator applied to all `boundary_count` nodes.
  static BoundaryOperatorSet on_all(const std::vector<BoundaryOperatorKind>& kinds, Eigen::Index boundary_count);

  const std::vector<BoundaryOperator>& ops() const noexcept { return ops_; }
  Eigen::Index boundary_count() const noexcept { return boundary_count_; }

 private:
  std::vector<BoundaryOperator> ops_;
  Eigen::Index boundary_count_;
};

/// Generalized symmetric collocation: interior values, then one block per
/// boundary operator in declaration order.
HermiteSystem assemble_multi_bc(const BoundarySpec& layout, const KernelSpec& kernel, const BoundaryOperatorSet& ops);

struct TargetFunction {
  std::function<double(PointRef)> value;
  /// Optional; a central difference is used when empty.
  std::function<Eigen::VectorXd(PointRef)> gradient;

  Eigen::VectorXd grad(PointRef x) const;
};

struct EdgeEffectResult {
  /// Hermite band RMS error divided by plain band RMS error (1 when both vanish).
  double ratio = 1.0;
  double plain_band_rms = 0.0;
  double hermite_band_rms = 0.0;
  Eigen::MatrixXd samples;  // one sample point per column
  Eigen::VectorXd plain_error;
  Eigen::VectorXd hermite_error;
  std::vector<bool> in_band;
};

/// Fits `target` once by plain value interpolation on all N + L nodes and once
/// by Hermite collocation, then compares RMS errors in the band of width
/// `band_width` along the bounding box of the layout. `samples_per_axis` <= 0
/// selects the default grid density.
EdgeEffectResult edge_effect_ratio(const TargetFunction& target, const BoundarySpec& layout, const KernelSpec& kernel,
                                   double band_width, int samples_per_axis = 0);

}  // namespace dfw
