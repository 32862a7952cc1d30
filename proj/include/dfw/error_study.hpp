#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dfw/hermite.hpp"
#include "dfw/node_design.hpp"
#include "dfw/series.hpp"

namespace dfw {

/// C / (M!)^N * prod_k |x - x_k| * deriv_bound, evaluated in log space so
/// that large M does not overflow. Zero at the nodes.
double conjecture_bound(PointRef x, const NodeSet& nodes, int scales, double deriv_bound, double c);

enum class NodeRule { Uniform, Chebyshev, Optimized };

std::string_view node_rule_name(NodeRule rule);
NodeRule parse_node_rule(std::string_view name);

/// Tensor-product layout with `per_axis` nodes per axis of the domain.
NodeSet make_nodes(NodeRule rule, const DomainBox& domain, int per_axis, std::uint64_t seed = 0,
                   int optimize_iterations = 200);

struct StudySpec {
  std::function<double(PointRef)> target;
  DomainBox domain = DomainBox::interval(-1.0, 1.0);
  std::vector<int> m_list;
  std::vector<int> n_list;
  ScaleKind scale_kind = ScaleKind::ShapeParams;
  /// First shape parameter for ShapeParams scales (values base * j).
  double shape_base = 1.0;
  int kernel_n = 2;
  NodeRule node_rule = NodeRule::Uniform;
  FitStrategy strategy = FitStrategy::Square;
  /// Samples per axis of the error grid; 0 selects the default density.
  int grid_density = 0;
  std::uint64_t seed = 0;
  int optimize_iterations = 200;
  /// Uniform bound on the target derivative entering the conjecture shape.
  double deriv_bound = 1.0;

  void validate() const;
  ScaleSet scales(int count) const;
};

struct StudyFit {
  NodeSet nodes;
  NodeSet data_points;
  FitResult fit;
};

/// Nodes by the node rule, data points by the strategy (square multiscale
/// fits take N*M points from the same rule, least squares a denser grid),
/// then the series fit of the target.
StudyFit fit_study_row(const StudySpec& spec, int m, int n);

struct ConvergenceRow {
  int m = 0;
  int n = 0;
  bool ok = false;
  std::string error;
  double max_err = 0.0;
  double rms_err = 0.0;
  double condition = 0.0;
  /// Max fit residual at the data points.
  double data_residual = 0.0;
  /// max over the error grid of conjecture_bound with C = 1.
  double conjecture_shape = 0.0;
  double fit_seconds = 0.0;
};

struct OrderEstimate {
  double slope = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares fit of the observed max errors against the conjecture shape,
/// log e = log C + log shape; the RMS log residual is the consistency score.
struct ConsistencyScore {
  double log_c = 0.0;
  double rms_log_residual = 0.0;
  int rows_used = 0;
};

struct ConvergenceRecord {
  std::vector<ConvergenceRow> rows;  // ordered by (M, N)
  std::map<int, OrderEstimate> order_by_n;
  ConsistencyScore consistency;
};

/// Slope of log(error) against log(M) by least squares; rows with
/// non-positive error are skipped. Needs two usable points.
OrderEstimate estimate_order(const std::vector<int>& ms, const std::vector<double>& errors);

ConsistencyScore consistency_score(const std::vector<double>& errors, const std::vector<double>& shapes);

ConvergenceRecord run_convergence(const StudySpec& spec);

/// Pointwise |model - target| on a dense grid with statistics split into the
/// boundary band (outer 20% of each axis, per side) and the interior.
struct ErrorProfile {
  Eigen::MatrixXd samples;
  Eigen::VectorXd errors;  // NaN where evaluation failed
  std::vector<bool> in_band;
  int missing = 0;
  double max_err = 0.0;
  double band_max = 0.0;
  double band_rms = 0.0;
  double band_median = 0.0;
  double interior_max = 0.0;
  double interior_rms = 0.0;
  double interior_median = 0.0;
};

inline constexpr double kBoundaryBandFraction = 0.2;

ErrorProfile error_map(const std::function<double(PointRef)>& model, const std::function<double(PointRef)>& target,
                       const DomainBox& domain, int grid_density);
ErrorProfile error_map(const DfwModel& model, const std::function<double(PointRef)>& target, const DomainBox& domain,
                       int grid_density);
ErrorProfile error_map(const HermiteModel& model, const std::function<double(PointRef)>& target,
                       const DomainBox& domain, int grid_density);

}  // namespace dfw
