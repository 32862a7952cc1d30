#include "dfw/error_study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "dfw/errors.hpp"

namespace dfw {

double conjecture_bound(PointRef x, const NodeSet& nodes, int scales, double deriv_bound, double c) {
  require_valid_point(x);
  if (x.size() != nodes.dim()) throw InvalidArgument("point and nodes differ in dimension");
  if (scales < 1) throw InvalidArgument("number of scales must be >= 1");
  if (!std::isfinite(deriv_bound) || deriv_bound < 0.0) throw InvalidArgument("deriv_bound must be >= 0");
  if (!std::isfinite(c) || !(c > 0.0)) throw InvalidArgument("constant C must be positive");
  if (deriv_bound == 0.0) return 0.0;
  double log_sum = std::log(deriv_bound) - scales * std::lgamma(static_cast<double>(nodes.size()) + 1.0);
  for (Eigen::Index k = 0; k < nodes.size(); ++k) {
    const double d = (x - nodes.point(k)).norm();
    if (d == 0.0) return 0.0;
    log_sum += std::log(d);
  }
  return c * std::exp(log_sum);
}

std::string_view node_rule_name(NodeRule rule) {
  switch (rule) {
    case NodeRule::Uniform:
      return "uniform";
    case NodeRule::Chebyshev:
      return "chebyshev";
    case NodeRule::Optimized:
      return "optimized";
  }
  return "uniform";
}

NodeRule parse_node_rule(std::string_view name) {
  if (name == "uniform") return NodeRule::Uniform;
  if (name == "chebyshev") return NodeRule::Chebyshev;
  if (name == "optimized") return NodeRule::Optimized;
  throw InvalidArgument("unknown node rule '" + std::string(name) + "'");
}

NodeSet make_nodes(NodeRule rule, const DomainBox& domain, int per_axis, std::uint64_t seed, int optimize_iterations) {
  if (per_axis < 1) throw InvalidArgument("node count per axis must be >= 1");
  const int dim = domain.dim();
  std::vector<NodeSet> axes;
  for (int a = 0; a < dim; ++a) {
    const double lo = domain.lower()[a];
    const double hi = domain.upper()[a];
    axes.push_back(rule == NodeRule::Chebyshev ? chebyshev_nodes(per_axis, lo, hi) : uniform_nodes(per_axis, lo, hi));
  }
  Eigen::Index total = 1;
  for (int a = 0; a < dim; ++a) total *= per_axis;
  Eigen::MatrixXd coords(dim, total);
  for (Eigen::Index p = 0; p < total; ++p) {
    Eigen::Index rest = p;
    for (int a = 0; a < dim; ++a) {
      coords(a, p) = axes[static_cast<std::size_t>(a)].coords()(0, rest % per_axis);
      rest /= per_axis;
    }
  }
  NodeSet nodes(coords);
  if (rule != NodeRule::Optimized) return nodes;
  return optimize_minmax(nodes, domain, optimize_iterations, seed).nodes;
}

void StudySpec::validate() const {
  if (!target) throw InvalidArgument("study needs a target function");
  auto check_list = [](const std::vector<int>& list, const char* what) {
    if (list.empty()) throw InvalidArgument(std::string(what) + " must be nonempty");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] < 1) throw InvalidArgument(std::string(what) + " entries must be >= 1");
      if (i > 0 && list[i] <= list[i - 1]) throw InvalidArgument(std::string(what) + " must be strictly increasing");
    }
  };
  check_list(m_list, "M list");
  check_list(n_list, "N list");
  if (kernel_n < 1) throw InvalidArgument("kernel dimension must be >= 1");
  if (grid_density < 0 || grid_density == 1) throw InvalidArgument("grid density must be >= 2 (or 0 for the default)");
  if (optimize_iterations < 0) throw InvalidArgument("optimizer iterations must be >= 0");
  if (!std::isfinite(deriv_bound) || deriv_bound < 0.0) throw InvalidArgument("deriv_bound must be >= 0");
  if (scale_kind == ScaleKind::ShapeParams && (!std::isfinite(shape_base) || !(shape_base > 0.0))) {
    throw InvalidArgument("shape base must be positive");
  }
}

ScaleSet StudySpec::scales(int count) const {
  switch (scale_kind) {
    case ScaleKind::LaplaceOrders:
      return ScaleSet::laplace_orders(count);
    case ScaleKind::Powers:
      return ScaleSet::powers(count);
    case ScaleKind::ShapeParams:
      return ScaleSet::shape_params(shape_base, count);
  }
  throw InvalidArgument("unknown scale kind");
}

OrderEstimate estimate_order(const std::vector<int>& ms, const std::vector<double>& errors) {
  if (ms.size() != errors.size()) throw InvalidArgument("order estimate needs matching M and error lists");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] >= 1 && errors[i] > 0.0 && std::isfinite(errors[i])) {
      xs.push_back(std::log(static_cast<double>(ms[i])));
      ys.push_back(std::log(errors[i]));
    }
  }
  if (xs.size() < 2) throw InvalidArgument("order estimate needs two rows with positive error");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("order estimate needs at least two distinct M");
  OrderEstimate out;
  out.slope = sxy / sxx;
  out.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  out.points = static_cast<int>(xs.size());
  return out;
}

ConsistencyScore consistency_score(const std::vector<double>& errors, const std::vector<double>& shapes) {
  if (errors.size() != shapes.size()) throw InvalidArgument("consistency score needs matching lists");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] > 0.0 && shapes[i] > 0.0 && std::isfinite(errors[i]) && std::isfinite(shapes[i])) {
      diffs.push_back(std::log(errors[i]) - std::log(shapes[i]));
    }
  }
  ConsistencyScore out;
  out.rows_used = static_cast<int>(diffs.size());
  if (diffs.empty()) {
    out.rms_log_residual = std::numeric_limits<double>::quiet_NaN();
    out.log_c = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  for (double d : diffs) out.log_c += d;
  out.log_c /= static_cast<double>(diffs.size());
  double sq = 0.0;
  for (double d : diffs) sq += (d - out.log_c) * (d - out.log_c);
  out.rms_log_residual = std::sqrt(sq / static_cast<double>(diffs.size()));
  return out;
}

namespace {

int ceil_root(double value, int dim) {
  int k = std::max(1, static_cast<int>(std::floor(std::pow(value, 1.0 / dim))));
  while (std::pow(static_cast<double>(k), dim) < value) ++k;
  return k;
}

}  // namespace

StudyFit fit_study_row(const StudySpec& spec, int m, int n) {
  spec.validate();
  const int dim = spec.domain.dim();
  NodeSet nodes = make_nodes(spec.node_rule, spec.domain, m, spec.seed, spec.optimize_iterations);
  const ScaleSet scales = spec.scales(n);
  const Eigen::Index unknowns = static_cast<Eigen::Index>(n) * nodes.size();

  NodeSet data_points = nodes;
  if (spec.strategy == FitStrategy::Square && n > 1) {
    if (dim != 1) throw InvalidArgument("square multiscale fits need a one-dimensional domain");
    data_points = make_nodes(spec.node_rule, spec.domain, static_cast<int>(unknowns), spec.seed,
                             spec.optimize_iterations);
  } else if (spec.strategy == FitStrategy::LeastSquares) {
    const int per_axis = ceil_root(2.0 * static_cast<double>(1 + unknowns), dim);
    data_points = make_nodes(spec.node_rule == NodeRule::Chebyshev ? NodeRule::Chebyshev : NodeRule::Uniform,
                             spec.domain, per_axis);
  }
  std::vector<double> data(static_cast<std::size_t>(data_points.size()));
  for (Eigen::Index i = 0; i < data_points.size(); ++i) data[static_cast<std::size_t>(i)] = spec.target(data_points.point(i));
  FitResult fitted = fit(nodes, scales, spec.kernel_n, data, data_points, spec.strategy);
  return StudyFit{std::move(nodes), std::move(data_points), std::move(fitted)};
}

namespace {

ConvergenceRow run_row(const StudySpec& spec, int m, int n, const Eigen::MatrixXd& grid) {
  ConvergenceRow row;
  row.m = m;
  row.n = n;
  try {
    const auto start = std::chrono::steady_clock::now();
    const StudyFit study = fit_study_row(spec, m, n);
    row.fit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const FitResult& fitted = study.fit;
    const NodeSet& nodes = study.nodes;
    row.condition = fitted.condition;
    row.data_residual = fitted.max_residual;

    double sq = 0.0;
    for (Eigen::Index p = 0; p < grid.cols(); ++p) {
      const double e = std::abs(evaluate(fitted.model, grid.col(p)) - spec.target(grid.col(p)));
      row.max_err = std::max(row.max_err, e);
      sq += e * e;
      row.conjecture_shape = std::max(row.conjecture_shape, conjecture_bound(grid.col(p), nodes, n, spec.deriv_bound, 1.0));
    }
    row.rms_err = std::sqrt(sq / static_cast<double>(grid.cols()));
    row.ok = true;
  } catch (const Error& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

ConvergenceRecord run_convergence(const StudySpec& spec) {
  spec.validate();
  const int density = spec.grid_density > 0 ? spec.grid_density : default_samples_per_axis(spec.domain.dim());
  const Eigen::MatrixXd grid = spec.domain.grid(density);

  ConvergenceRecord record;
  for (int m : spec.m_list) {
    for (int n : spec.n_list) record.rows.push_back(run_row(spec, m, n, grid));
  }

  std::vector<double> errors;
  std::vector<double> shapes;
  for (int n : spec.n_list) {
    std::vector<int> ms;
    std::vector<double> es;
    for (const auto& row : record.rows) {
      if (row.n == n && row.ok) {
        ms.push_back(row.m);
        es.push_back(row.max_err);
      }
    }
    try {
      record.order_by_n[n] = estimate_order(ms, es);
    } catch (const InvalidArgument&) {
      // Fewer than two usable rows: no order for this N.
    }
  }
  for (const auto& row : record.rows) {
    if (row.ok) {
      errors.push_back(row.max_err);
      shapes.push_back(row.conjecture_shape);
    }
  }
  record.consistency = consistency_score(errors, shapes);
  return record;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

ErrorProfile error_map(const std::function<double(PointRef)>& model, const std::function<double(PointRef)>& target,
                       const DomainBox& domain, int grid_density) {
  if (!model || !target) throw InvalidArgument("error map needs a model and a target");
  if (grid_density < 2) throw InvalidArgument("grid density must be >= 2");
  ErrorProfile out;
  out.samples = domain.grid(grid_density);
  const Eigen::Index count = out.samples.cols();
  out.errors.resize(count);
  out.in_band.resize(static_cast<std::size_t>(count));
  std::vector<double> band;
  std::vector<double> interior;
  for (Eigen::Index p = 0; p < count; ++p) {
    const auto x = out.samples.col(p);
    const bool in_band = domain.in_boundary_band(x, kBoundaryBandFraction);
    out.in_band[static_cast<std::size_t>(p)] = in_band;
    double e = std::numeric_limits<double>::quiet_NaN();
    try {
      e = std::abs(model(x) - target(x));
    } catch (const Error&) {
      e = std::numeric_limits<double>::quiet_NaN();
    }
    out.errors[p] = e;
    if (!std::isfinite(e)) {
      ++out.missing;
      continue;
    }
    out.max_err = std::max(out.max_err, e);
    (in_band ? band : interior).push_back(e);
  }
  auto stats = [](const std::vector<double>& v, double& mx, double& rms, double& med) {
    double sq = 0.0;
    for (double e : v) {
      mx = std::max(mx, e);
      sq += e * e;
    }
    rms = v.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(v.size()));
    med = median(v);
  };
  stats(band, out.band_max, out.band_rms, out.band_median);
  stats(interior, out.interior_max, out.interior_rms, out.interior_median);
  return out;
}

ErrorProfile error_map(const DfwModel& model, const std::function<double(PointRef)>& target, const DomainBox& domain,
                       int grid_density) {
  return error_map([&model](PointRef x) { return evaluate(model, x); }, target, domain, grid_density);
}

ErrorProfile error_map(const HermiteModel& model, const std::function<double(PointRef)>& target,
                       const DomainBox& domain, int grid_density) {
  return error_map([&model](PointRef x) { return evaluate_hermite(model, x); }, target, domain, grid_density);
}

}  // namespace dfw
