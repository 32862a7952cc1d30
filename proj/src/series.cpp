#include "dfw/series.hpp"

#include <cmath>
#include <string>

#include "dfw/errors.hpp"
#include "dfw/linalg.hpp"

namespace dfw {

std::string_view scale_kind_name(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::LaplaceOrders:
      return "LaplaceOrders";
    case ScaleKind::ShapeParams:
      return "ShapeParams";
    case ScaleKind::Powers:
      return "Powers";
  }
  return "unknown";
}

ScaleKind parse_scale_kind(std::string_view name) {
  for (ScaleKind k : {ScaleKind::LaplaceOrders, ScaleKind::ShapeParams, ScaleKind::Powers}) {
    if (scale_kind_name(k) == name) return k;
  }
  throw InvalidArgument("unknown scale kind '" + std::string(name) + "'");
}

ScaleSet::ScaleSet(ScaleKind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("scale set must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) throw InvalidArgument("scale values must be finite");
    if (i > 0 && !(v > values_[i - 1])) throw InvalidArgument("scale values must be strictly increasing");
    switch (kind_) {
      case ScaleKind::LaplaceOrders:
        if (v < 1.0 || v != std::floor(v)) throw InvalidArgument("Laplace orders must be integers >= 1");
        break;
      case ScaleKind::ShapeParams:
        if (v < 0.0) throw InvalidArgument("MQ shape parameters must be >= 0");
        break;
      case ScaleKind::Powers:
        if (!(v > 0.0)) throw InvalidArgument("distance powers must be > 0");
        break;
    }
  }
}

ScaleSet ScaleSet::laplace_orders(int count) {
  std::vector<double> v;
  for (int m = 1; m <= count; ++m) v.push_back(m);
  return ScaleSet(ScaleKind::LaplaceOrders, std::move(v));
}

ScaleSet ScaleSet::powers(int count) {
  std::vector<double> v;
  for (int m = 1; m <= count; ++m) v.push_back(m);
  return ScaleSet(ScaleKind::Powers, std::move(v));
}

ScaleSet ScaleSet::shape_params(double base, int count) {
  std::vector<double> v;
  for (int j = 1; j <= count; ++j) v.push_back(base * j);
  return ScaleSet(ScaleKind::ShapeParams, std::move(v));
}

KernelSpec ScaleSet::kernel(Eigen::Index j, int kernel_n) const {
  const double v = values_.at(static_cast<std::size_t>(j));
  switch (kind_) {
    case ScaleKind::LaplaceOrders:
      return KernelSpec::laplace(kernel_n, static_cast<int>(v));
    case ScaleKind::ShapeParams:
      return KernelSpec::mq(v);
    case ScaleKind::Powers:
      return KernelSpec::power_distance(v);
  }
  throw InvalidArgument("unknown scale kind");
}

std::string_view strategy_name(FitStrategy strategy) {
  switch (strategy) {
    case FitStrategy::Square:
      return "square";
    case FitStrategy::LeastSquares:
      return "least_squares";
    case FitStrategy::GreedyMultiscale:
      return "greedy_multiscale";
  }
  return "unknown";
}

FitStrategy parse_strategy(std::string_view name) {
  for (FitStrategy s : {FitStrategy::Square, FitStrategy::LeastSquares, FitStrategy::GreedyMultiscale}) {
    if (strategy_name(s) == name) return s;
  }
  throw InvalidArgument("unknown fit strategy '" + std::string(name) + "'");
}

namespace {

std::vector<KernelSpec> scale_kernels(const ScaleSet& scales, int kernel_n) {
  std::vector<KernelSpec> out;
  for (Eigen::Index j = 0; j < scales.size(); ++j) {
    out.push_back(scales.kernel(j, kernel_n));
    out.back().validate();
  }
  return out;
}

// Writes kernel_j(|x - x_k|) into row[first + j*M + k].
template <typename Row>
void fill_basis(const std::vector<KernelSpec>& kernels, const NodeSet& nodes, PointRef x, Row&& row,
                Eigen::Index first) {
  const Eigen::Index m = nodes.size();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double r = (x - nodes.point(k)).norm();
    for (std::size_t j = 0; j < kernels.size(); ++j) {
      row(first + static_cast<Eigen::Index>(j) * m + k) = radial_profile(kernels[j], r);
    }
  }
}

void require_data(std::span<const double> data, Eigen::Index expected) {
  if (static_cast<Eigen::Index>(data.size()) != expected) {
    throw InvalidArgument("data length " + std::to_string(data.size()) + " does not match " +
                          std::to_string(expected) + " evaluation points");
  }
  for (double v : data) {
    if (!std::isfinite(v)) throw InvalidArgument("data contains non-finite values");
  }
}

Eigen::MatrixXd unpack(const Eigen::VectorXd& packed, Eigen::Index first, Eigen::Index n_scales, Eigen::Index m) {
  Eigen::MatrixXd c(n_scales, m);
  for (Eigen::Index j = 0; j < n_scales; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) c(j, k) = packed[first + j * m + k];
  }
  return c;
}

}  // namespace

DfwModel::DfwModel(ScaleSet scales, int kernel_n, NodeSet nodes, Eigen::MatrixXd coeffs, double offset,
                   FitStrategy strategy)
    : scales_(std::move(scales)),
      kernel_n_(kernel_n),
      nodes_(std::move(nodes)),
      coeffs_(std::move(coeffs)),
      offset_(offset),
      strategy_(strategy) {
  if (coeffs_.rows() != scales_.size() || coeffs_.cols() != nodes_.size()) {
    throw InvalidArgument("coefficient matrix must be (scales x nodes)");
  }
  if (!coeffs_.allFinite() || !std::isfinite(offset_)) throw InvalidArgument("model coefficients must be finite");
  kernels_ = scale_kernels(scales_, kernel_n_);
}

DfwModel DfwModel::with_coeffs(Eigen::MatrixXd coeffs) const {
  DfwModel out(scales_, kernel_n_, nodes_, std::move(coeffs), offset_, strategy_);
  out.offset_function_ = offset_function_;
  return out;
}

Eigen::MatrixXd assemble(const NodeSet& nodes, const ScaleSet& scales, int kernel_n, const NodeSet& eval_points) {
  if (nodes.dim() != eval_points.dim()) throw InvalidArgument("nodes and evaluation points differ in dimension");
  const auto kernels = scale_kernels(scales, kernel_n);
  const Eigen::Index cols = 1 + scales.size() * nodes.size();
  Eigen::MatrixXd a(eval_points.size(), cols);
  for (Eigen::Index i = 0; i < eval_points.size(); ++i) {
    a(i, 0) = 1.0;
    fill_basis(kernels, nodes, eval_points.point(i), a.row(i), 1);
  }
  return a;
}

FitResult fit(const NodeSet& nodes, const ScaleSet& scales, int kernel_n, std::span<const double> data,
              const NodeSet& eval_points, FitStrategy strategy) {
  require_data(data, eval_points.size());
  const Eigen::Index m = nodes.size();
  const Eigen::Index n_scales = scales.size();
  const Eigen::Index rows = eval_points.size();
  const Eigen::Index unknowns = n_scales * m;
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(data.data(), rows);
  const Eigen::MatrixXd full = assemble(nodes, scales, kernel_n, eval_points);

  Eigen::VectorXd packed = Eigen::VectorXd::Zero(1 + unknowns);
  double condition = 1.0;

  switch (strategy) {
    case FitStrategy::Square: {
      if (rows == 1 + unknowns) {
        const LinearSolve s = solve_square(full, rhs, "square fit");
        packed = s.solution;
        condition = s.condition;
      } else if (rows == unknowns) {
        const LinearSolve s = solve_square(full.rightCols(unknowns), rhs, "square fit");
        packed.tail(unknowns) = s.solution;
        condition = s.condition;
      } else {
        throw InvalidArgument("square fit needs 1 + N*M or N*M data points, got " + std::to_string(rows));
      }
      break;
    }
    case FitStrategy::LeastSquares: {
      if (rows < 1 + unknowns) {
        throw InvalidArgument("least-squares fit needs at least 1 + N*M data points, got " + std::to_string(rows));
      }
      const LinearSolve s = solve_least_squares(full, rhs, "least-squares fit");
      packed = s.solution;
      condition = s.condition;
      break;
    }
    case FitStrategy::GreedyMultiscale: {
      if (rows != m) throw InvalidArgument("greedy multiscale fit needs exactly M data points");
      packed[0] = rhs.mean();
      Eigen::VectorXd residual = rhs.array() - packed[0];
      for (Eigen::Index j = 0; j < n_scales; ++j) {
        const Eigen::MatrixXd block = full.middleCols(1 + j * m, m);
        const LinearSolve s = solve_square(block, residual, "greedy multiscale fit");
        packed.segment(1 + j * m, m) = s.solution;
        residual -= block * s.solution;
        condition = std::max(condition, s.condition);
      }
      break;
    }
  }

  const double max_residual = (full * packed - rhs).cwiseAbs().maxCoeff();
  DfwModel model(scales, kernel_n, nodes, unpack(packed, 1, n_scales, m), packed[0], strategy);
  return FitResult{std::move(model), max_residual, condition, condition > kConditionWarning};
}

double evaluate(const DfwModel& model, PointRef x) {
  require_valid_point(x);
  if (x.size() != model.nodes().dim()) throw InvalidArgument("evaluation point dimension mismatch");
  const Eigen::Index m = model.nodes().size();
  const auto& kernels = model.kernels();
  Eigen::RowVectorXd basis(static_cast<Eigen::Index>(kernels.size()) * m);
  fill_basis(kernels, model.nodes(), x, basis, 0);
  double sum = 0.0;
  for (std::size_t j = 0; j < kernels.size(); ++j) {
    sum += model.coeffs().row(static_cast<Eigen::Index>(j)).dot(basis.segment(static_cast<Eigen::Index>(j) * m, m));
  }
  double value = model.offset() + sum;
  if (model.offset_function()) value += model.offset_function()(x);
  return value;
}

RationalDfwModel::RationalDfwModel(DfwModel numerator, DfwModel denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (denominator_.offset() != 1.0) throw InvalidArgument("rational denominator offset must be exactly 1");
  if (denominator_.offset_function()) throw InvalidArgument("rational denominator carries no offset function");
  if (numerator_.kernel_n() != denominator_.kernel_n() || numerator_.nodes().dim() != denominator_.nodes().dim()) {
    throw InvalidArgument("rational numerator and denominator must share dimensions");
  }
}

Eigen::MatrixXd assemble_rational(const NodeSet& nodes_num, const ScaleSet& scales_num, const NodeSet& nodes_den,
                                  const ScaleSet& scales_den, const NodeSet& sample_points,
                                  std::span<const double> data, int kernel_n) {
  require_data(data, sample_points.size());
  const Eigen::MatrixXd num = assemble(nodes_num, scales_num, kernel_n, sample_points);
  const Eigen::MatrixXd den = assemble(nodes_den, scales_den, kernel_n, sample_points);
  const Eigen::Index den_unknowns = den.cols() - 1;
  Eigen::MatrixXd a(sample_points.size(), num.cols() + den_unknowns);
  a.leftCols(num.cols()) = num;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    a.row(i).tail(den_unknowns) = -data[static_cast<std::size_t>(i)] * den.row(i).tail(den_unknowns);
  }
  return a;
}

RationalFitResult fit_rational(const NodeSet& nodes_num, const ScaleSet& scales_num, const NodeSet& nodes_den,
                               const ScaleSet& scales_den, const NodeSet& sample_points,
                               std::span<const double> data, int kernel_n) {
  const Eigen::MatrixXd a =
      assemble_rational(nodes_num, scales_num, nodes_den, scales_den, sample_points, data, kernel_n);
  if (a.rows() < a.cols()) {
    throw InvalidArgument("rational fit needs at least " + std::to_string(a.cols()) + " samples");
  }
  // f_i (1 + den_i) = num_i  <=>  [1 | U_num | -f_i U_den] c = f_i
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(data.data(), a.rows());
  const LinearSolve s = solve_least_squares(a, rhs, "rational fit");

  const Eigen::Index num_cols = 1 + scales_num.size() * nodes_num.size();
  const Eigen::VectorXd& c = s.solution;
  DfwModel num(scales_num, kernel_n, nodes_num, unpack(c, 1, scales_num.size(), nodes_num.size()), c[0]);
  DfwModel den(scales_den, kernel_n, nodes_den,
               unpack(c.tail(c.size() - num_cols), 0, scales_den.size(), nodes_den.size()), 1.0);

  const Eigen::VectorXd residual = a * c - rhs;
  double pole_risk = 0.0;
  for (Eigen::Index i = 0; i < sample_points.size(); ++i) {
    pole_risk = std::max(pole_risk, std::abs(evaluate(den, sample_points.point(i)) - 1.0));
  }
  return RationalFitResult{RationalDfwModel(std::move(num), std::move(den)), residual.cwiseAbs().maxCoeff(),
                           residual.norm(), pole_risk, s.condition};
}

double evaluate(const RationalDfwModel& model, PointRef x) {
  const double den = evaluate(model.denominator(), x);
  if (!(std::abs(den) >= kPoleThreshold)) throw PoleError("rational model has a pole at the query point");
  return evaluate(model.numerator(), x) / den;
}

}  // namespace dfw
