#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dfw/kernels.hpp"
#include "dfw/points.hpp"

namespace dfw {

/// Which parameter indexes the scales of a multiscale series.
enum class ScaleKind {
  LaplaceOrders,  // fundamental solutions of iterated Laplacians, m = values
  ShapeParams,    // MQ kernels sqrt(r^2 + c_j^2)
  Powers,         // power distances r^{m}
};

std::string_view scale_kind_name(ScaleKind kind);
ScaleKind parse_scale_kind(std::string_view name);

class ScaleSet {
 public:
  /// Throws InvalidArgument unless values are nonempty, finite and strictly
  /// increasing; Laplace orders must be integers >= 1, powers > 0, shapes >= 0.
  ScaleSet(ScaleKind kind, std::vector<double> values);

  static ScaleSet laplace_orders(int count);
  static ScaleSet powers(int count);
  static ScaleSet shape_params(double base, int count);

  ScaleKind kind() const noexcept { return kind_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(values_.size()); }

  /// Kernel of scale j for PDE dimension `kernel_n`.
  KernelSpec kernel(Eigen::Index j, int kernel_n) const;

 private:
  ScaleKind kind_;
  std::vector<double> values_;
};

enum class FitStrategy { Square, LeastSquares, GreedyMultiscale };

std::string_view strategy_name(FitStrategy strategy);
FitStrategy parse_strategy(std::string_view name);

using OffsetFunction = std::function<double(PointRef)>;

/// a0 + f0(x) + sum_{j,k} coeffs(j,k) * kernel_j(|x - x_k|)
class DfwModel {
 public:
  DfwModel(ScaleSet scales, int kernel_n, NodeSet nodes, Eigen::MatrixXd coeffs, double offset,
           FitStrategy strategy = FitStrategy::Square);

  const ScaleSet& scales() const noexcept { return scales_; }
  int kernel_n() const noexcept { return kernel_n_; }
  const NodeSet& nodes() const noexcept { return nodes_; }
  const Eigen::MatrixXd& coeffs() const noexcept { return coeffs_; }
  double offset() const noexcept { return offset_; }
  FitStrategy strategy() const noexcept { return strategy_; }
  const OffsetFunction& offset_function() const noexcept { return offset_function_; }
  const std::vector<KernelSpec>& kernels() const noexcept { return kernels_; }

  /// Optional user-supplied harmonic offset f0; an empty function means zero.
  void set_offset_function(OffsetFunction f0) { offset_function_ = std::move(f0); }

  DfwModel with_coeffs(Eigen::MatrixXd coeffs) const;

 private:
  ScaleSet scales_;
  int kernel_n_;
  NodeSet nodes_;
  Eigen::MatrixXd coeffs_;
  double offset_;
  FitStrategy strategy_;
  OffsetFunction offset_function_;
  std::vector<KernelSpec> kernels_;
};

/// Collocation matrix: column 0 is all ones, column 1 + j*M + k holds
/// kernel_j(|e_i - x_k|) (scale-major, then node-major).
Eigen::MatrixXd assemble(const NodeSet& nodes, const ScaleSet& scales, int kernel_n, const NodeSet& eval_points);

struct FitResult {
  DfwModel model;
  double max_residual = 0.0;
  double condition = 1.0;
  bool condition_warning = false;
};

/// Fits series coefficients to `data` sampled at `eval_points`.
///   Square: needs 1 + N*M == M' (or N*M == M', in which case a0 = 0).
///   LeastSquares: needs M' >= 1 + N*M; minimum-norm solution.
///   GreedyMultiscale: needs M' == M; a0 = mean(data), then one square solve
///   per scale on the running residual.
FitResult fit(const NodeSet& nodes, const ScaleSet& scales, int kernel_n, std::span<const double> data,
              const NodeSet& eval_points, FitStrategy strategy);

double evaluate(const DfwModel& model, PointRef x);

/// Numerator and denominator series; the denominator offset is pinned to 1.
class RationalDfwModel {
 public:
  RationalDfwModel(DfwModel numerator, DfwModel denominator);

  const DfwModel& numerator() const noexcept { return numerator_; }
  const DfwModel& denominator() const noexcept { return denominator_; }

 private:
  DfwModel numerator_;
  DfwModel denominator_;
};

/// |denominator| below this at a query point raises PoleError.
inline constexpr double kPoleThreshold = 1e-10;

struct RationalFitResult {
  RationalDfwModel model;
  /// Max |linearized residual| over the samples: |f_i den(x_i) - num(x_i)|.
  double max_residual = 0.0;
  /// Euclidean norm of the linearized residual vector.
  double residual_norm = 0.0;
  /// max_i |den(x_i) - 1|; large values flag pole risk.
  double pole_risk = 0.0;
  double condition = 1.0;
};

RationalFitResult fit_rational(const NodeSet& nodes_num, const ScaleSet& scales_num, const NodeSet& nodes_den,
                               const ScaleSet& scales_den, const NodeSet& sample_points,
                               std::span<const double> data, int kernel_n);

double evaluate(const RationalDfwModel& model, PointRef x);

/// Linearized least-squares matrix [1 | U_num | -f_i U_den] used by fit_rational.
Eigen::MatrixXd assemble_rational(const NodeSet& nodes_num, const ScaleSet& scales_num, const NodeSet& nodes_den,
                                  const ScaleSet& scales_den, const NodeSet& sample_points,
                                  std::span<const double> data, int kernel_n);

}  // namespace dfw
