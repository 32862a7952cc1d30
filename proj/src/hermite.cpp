#include "dfw/hermite.hpp"

#include <cmath>
#include <set>
#include <string>

#include "dfw/errors.hpp"
#include "dfw/linalg.hpp"

namespace dfw {

namespace {

struct Functional {
  BoundaryOperatorKind kind = BoundaryOperatorKind::Value;
  Eigen::VectorXd point;
  Eigen::VectorXd normal;
};

// Constraint functional `row` (acting on x) applied to basis functional `col`
// (acting on the source point) of the kernel. Normal-derivative bases carry
// the minus sign that makes the pairing symmetric.
double pair(const KernelDifferentiator& diff, const Functional& row, const Functional& col) {
  using K = BoundaryOperatorKind;
  const Eigen::VectorXd d = row.point - col.point;
  switch (row.kind) {
    case K::Value:
      switch (col.kind) {
        case K::Value:
          return diff.value(d);
        case K::NormalDerivative:
          return -diff.directional(d, col.normal);
        case K::LaplacianTrace:
          return diff.laplacian(d);
      }
      break;
    case K::NormalDerivative:
      switch (col.kind) {
        case K::Value:
          return diff.directional(d, row.normal);
        case K::NormalDerivative:
          return -diff.second_directional(d, row.normal, col.normal);
        case K::LaplacianTrace:
          return diff.laplacian_directional(d, row.normal);
      }
      break;
    case K::LaplacianTrace:
      switch (col.kind) {
        case K::Value:
          return diff.laplacian(d);
        case K::NormalDerivative:
          return -diff.laplacian_directional(d, col.normal);
        case K::LaplacianTrace:
          return diff.bilaplacian(d);
      }
      break;
  }
  throw InvalidArgument("unknown boundary operator");
}

HermiteSystem assemble_functionals(const std::vector<Functional>& fs, const KernelSpec& kernel) {
  const KernelDifferentiator diff(kernel);
  const auto n = static_cast<Eigen::Index>(fs.size());
  HermiteSystem sys;
  sys.matrix.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      sys.matrix(a, b) = pair(diff, fs[static_cast<std::size_t>(a)], fs[static_cast<std::size_t>(b)]);
    }
  }
  sys.symmetry_defect = n > 0 ? (sys.matrix - sys.matrix.transpose()).cwiseAbs().maxCoeff() : 0.0;
  return sys;
}

std::vector<Functional> value_functionals(const Eigen::MatrixXd& points) {
  std::vector<Functional> fs;
  for (Eigen::Index i = 0; i < points.cols(); ++i) fs.push_back({BoundaryOperatorKind::Value, points.col(i), {}});
  return fs;
}

std::vector<Functional> hermite_functionals(const BoundarySpec& layout) {
  std::vector<Functional> fs = value_functionals(layout.all_nodes());
  for (Eigen::Index j = 0; j < layout.boundary_count(); ++j) {
    fs.push_back({BoundaryOperatorKind::NormalDerivative, layout.boundary().col(j), layout.normals().col(j)});
  }
  return fs;
}

void require_unit(PointRef v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-12) throw InvalidArgument(std::string(what) + " must be a unit vector");
}

}  // namespace

BoundarySpec::BoundarySpec(Eigen::MatrixXd interior, Eigen::MatrixXd boundary, Eigen::MatrixXd normals)
    : interior_(std::move(interior)), boundary_(std::move(boundary)), normals_(std::move(normals)) {
  if (interior_.cols() + boundary_.cols() < 1) throw InvalidArgument("layout needs at least one node");
  dim_ = static_cast<int>(interior_.cols() > 0 ? interior_.rows() : boundary_.rows());
  if (dim_ < 1) throw InvalidArgument("layout points must have dimension >= 1");
  if ((interior_.cols() > 0 && interior_.rows() != dim_) || (boundary_.cols() > 0 && boundary_.rows() != dim_)) {
    throw InvalidArgument("interior and boundary nodes differ in dimension");
  }
  if (normals_.cols() != boundary_.cols() || (normals_.cols() > 0 && normals_.rows() != dim_)) {
    throw InvalidArgument("one normal of matching dimension is required per boundary node");
  }
  if (interior_.cols() == 0) interior_.resize(dim_, 0);
  if (boundary_.cols() == 0) {
    boundary_.resize(dim_, 0);
    normals_.resize(dim_, 0);
  }
  if (!interior_.allFinite() || !boundary_.allFinite() || !normals_.allFinite()) {
    throw InvalidArgument("layout contains non-finite values");
  }
  for (Eigen::Index j = 0; j < normals_.cols(); ++j) require_unit(normals_.col(j), "boundary normal");

  const Eigen::MatrixXd nodes = all_nodes();
  double diameter = 0.0;
  if (nodes.cols() > 1) diameter = (nodes.rowwise().maxCoeff() - nodes.rowwise().minCoeff()).norm();
  const double tol = kDistinctTolerance * std::max(1.0, diameter);
  if (!(min_pairwise_distance(nodes) > tol)) {
    throw InvalidArgument("layout nodes are not distinct (minimum separation below " + std::to_string(tol) + ")");
  }
}

Eigen::MatrixXd BoundarySpec::all_nodes() const {
  Eigen::MatrixXd nodes(dim_, interior_.cols() + boundary_.cols());
  nodes << interior_, boundary_;
  return nodes;
}

HermiteSystem assemble_hermite(const BoundarySpec& layout, const KernelSpec& kernel) {
  return assemble_functionals(hermite_functionals(layout), kernel);
}

HermiteModel::HermiteModel(KernelSpec kernel, BoundarySpec layout, Eigen::VectorXd beta)
    : kernel_(std::move(kernel)), layout_(std::move(layout)), beta_(std::move(beta)) {
  kernel_.validate();
  if (beta_.size() != layout_.interior_count() + 2 * layout_.boundary_count()) {
    throw InvalidArgument("Hermite coefficient vector must have length N + 2L");
  }
  if (!beta_.allFinite()) throw InvalidArgument("Hermite coefficients must be finite");
}

HermiteFit fit_hermite(const BoundarySpec& layout, const KernelSpec& kernel, std::span<const double> interior_values,
                       std::span<const double> dirichlet_values, std::span<const double> neumann_values) {
  const Eigen::Index n = layout.interior_count();
  const Eigen::Index l = layout.boundary_count();
  if (static_cast<Eigen::Index>(interior_values.size()) != n ||
      static_cast<Eigen::Index>(dirichlet_values.size()) != l ||
      static_cast<Eigen::Index>(neumann_values.size()) != l) {
    throw InvalidArgument("Hermite data sizes must be (N, L, L)");
  }
  Eigen::VectorXd rhs(n + 2 * l);
  for (Eigen::Index i = 0; i < n; ++i) rhs[i] = interior_values[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < l; ++j) {
    rhs[n + j] = dirichlet_values[static_cast<std::size_t>(j)];
    rhs[n + l + j] = neumann_values[static_cast<std::size_t>(j)];
  }
  if (!rhs.allFinite()) throw InvalidArgument("Hermite data contains non-finite values");

  const HermiteSystem sys = assemble_hermite(layout, kernel);
  const LinearSolve s = solve_square(sys.matrix, rhs, "Hermite fit");
  const double residual = rhs.size() > 0 ? (sys.matrix * s.solution - rhs).cwiseAbs().maxCoeff() : 0.0;
  return HermiteFit{HermiteModel(kernel, layout, s.solution), residual, s.condition};
}

namespace {

double evaluate_functional(const HermiteModel& model, const Functional& row) {
  const KernelDifferentiator diff(model.kernel());
  const auto basis = hermite_functionals(model.layout());
  double sum = 0.0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const double beta = model.beta()[static_cast<Eigen::Index>(b)];
    if (beta != 0.0) sum += beta * pair(diff, row, basis[b]);
  }
  return sum;
}

}  // namespace

double evaluate_hermite(const HermiteModel& model, PointRef x) {
  require_valid_point(x);
  if (x.size() != model.layout().dim()) throw InvalidArgument("evaluation point dimension mismatch");
  return evaluate_functional(model, {BoundaryOperatorKind::Value, x, {}});
}

double evaluate_hermite(const HermiteModel& model, PointRef x, PointRef direction) {
  require_valid_point(x);
  if (x.size() != model.layout().dim()) throw InvalidArgument("evaluation point dimension mismatch");
  require_same_dimension(x, direction);
  require_unit(direction, "derivative direction");
  return evaluate_functional(model, {BoundaryOperatorKind::NormalDerivative, x, direction});
}

BoundaryOperatorSet::BoundaryOperatorSet(std::vector<BoundaryOperator> ops, Eigen::Index boundary_count)
    : ops_(std::move(ops)), boundary_count_(boundary_count) {
  if (ops_.empty() || ops_.size() > 3) throw InvalidArgument("between one and three boundary operators are supported");
  std::vector<bool> covered(static_cast<std::size_t>(boundary_count), false);
  for (const auto& op : ops_) {
    std::set<Eigen::Index> seen;
    for (Eigen::Index j : op.nodes) {
      if (j < 0 || j >= boundary_count) throw InvalidArgument("boundary operator references an unknown node");
      if (!seen.insert(j).second) throw InvalidArgument("boundary operator lists a node twice");
      covered[static_cast<std::size_t>(j)] = true;
    }
  }
  for (bool c : covered) {
    if (!c) throw InvalidArgument("boundary operators must cover every boundary node");
  }
}

BoundaryOperatorSet BoundaryOperatorSet::on_all(const std::vector<BoundaryOperatorKind>& kinds,
                                                Eigen::Index boundary_count) {
  std::vector<BoundaryOperator> ops;
  for (BoundaryOperatorKind k : kinds) {
    BoundaryOperator op{k, {}};
    for (Eigen::Index j = 0; j < boundary_count; ++j) op.nodes.push_back(j);
    ops.push_back(std::move(op));
  }
  return BoundaryOperatorSet(std::move(ops), boundary_count);
}

HermiteSystem assemble_multi_bc(const BoundarySpec& layout, const KernelSpec& kernel, const BoundaryOperatorSet& ops) {
  if (ops.boundary_count() != layout.boundary_count()) {
    throw InvalidArgument("operator set and layout disagree on the boundary node count");
  }
  std::vector<Functional> fs = value_functionals(layout.interior());
  for (const auto& op : ops.ops()) {
    for (Eigen::Index j : op.nodes) {
      Functional f{op.kind, layout.boundary().col(j), {}};
      if (op.kind == BoundaryOperatorKind::NormalDerivative) f.normal = layout.normals().col(j);
      fs.push_back(std::move(f));
    }
  }
  return assemble_functionals(fs, kernel);
}

Eigen::VectorXd TargetFunction::grad(PointRef x) const {
  if (gradient) return gradient(x);
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double up = value(probe);
    probe[i] = x[i] - h;
    const double down = value(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

EdgeEffectResult edge_effect_ratio(const TargetFunction& target, const BoundarySpec& layout, const KernelSpec& kernel,
                                   double band_width, int samples_per_axis) {
  if (!target.value) throw InvalidArgument("edge-effect study needs a target function");
  const Eigen::MatrixXd nodes = layout.all_nodes();
  const Eigen::VectorXd lower = nodes.rowwise().minCoeff();
  const Eigen::VectorXd upper = nodes.rowwise().maxCoeff();
  if (!((upper - lower).minCoeff() > 0.0)) throw InvalidArgument("layout bounding box is degenerate");
  const double diameter = (upper - lower).norm();
  if (!(band_width > 0.0) || !(band_width < diameter)) {
    throw InvalidArgument("band width must be positive and smaller than the domain diameter");
  }

  // Plain value interpolation on all N + L nodes.
  const HermiteSystem plain = assemble_functionals(value_functionals(nodes), kernel);
  Eigen::VectorXd plain_rhs(nodes.cols());
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) plain_rhs[i] = target.value(nodes.col(i));
  const LinearSolve plain_fit = solve_square(plain.matrix, plain_rhs, "plain interpolation");
  const HermiteModel plain_model(kernel, BoundarySpec(nodes, Eigen::MatrixXd(layout.dim(), 0),
                                                      Eigen::MatrixXd(layout.dim(), 0)),
                                 plain_fit.solution);

  std::vector<double> interior_values;
  std::vector<double> dirichlet;
  std::vector<double> neumann;
  for (Eigen::Index i = 0; i < layout.interior_count(); ++i) interior_values.push_back(target.value(layout.interior().col(i)));
  for (Eigen::Index j = 0; j < layout.boundary_count(); ++j) {
    dirichlet.push_back(target.value(layout.boundary().col(j)));
    neumann.push_back(target.grad(layout.boundary().col(j)).dot(layout.normals().col(j)));
  }
  const HermiteFit hermite = fit_hermite(layout, kernel, interior_values, dirichlet, neumann);

  EdgeEffectResult out;
  const int per_axis = samples_per_axis > 0 ? samples_per_axis : default_samples_per_axis(layout.dim());
  out.samples = tensor_grid(lower, upper, per_axis);
  const Eigen::Index count = out.samples.cols();
  out.plain_error.resize(count);
  out.hermite_error.resize(count);
  out.in_band.resize(static_cast<std::size_t>(count));
  double scale = plain_rhs.cwiseAbs().maxCoeff();
  double plain_sq = 0.0;
  double hermite_sq = 0.0;
  Eigen::Index band_count = 0;
  for (Eigen::Index p = 0; p < count; ++p) {
    const auto x = out.samples.col(p);
    const double f = target.value(x);
    scale = std::max(scale, std::abs(f));
    out.plain_error[p] = std::abs(evaluate_hermite(plain_model, x) - f);
    out.hermite_error[p] = std::abs(evaluate_hermite(hermite.model, x) - f);
    const double to_edge = std::min((x - lower).minCoeff(), (upper - x).minCoeff());
    const bool band = to_edge < band_width;
    out.in_band[static_cast<std::size_t>(p)] = band;
    if (band) {
      plain_sq += out.plain_error[p] * out.plain_error[p];
      hermite_sq += out.hermite_error[p] * out.hermite_error[p];
      ++band_count;
    }
  }
  if (band_count > 0) {
    out.plain_band_rms = std::sqrt(plain_sq / band_count);
    out.hermite_band_rms = std::sqrt(hermite_sq / band_count);
  }
  const double floor = 1e-12 * std::max(scale, 1e-300);
  if (out.plain_band_rms < floor && out.hermite_band_rms < floor) {
    out.ratio = 1.0;
  } else {
    out.ratio = out.hermite_band_rms / out.plain_band_rms;
  }
  return out;
}

}  // namespace dfw
