#include "dfw/node_design.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dfw/errors.hpp"
#include "dfw/linalg.hpp"

namespace dfw {

DomainBox::DomainBox(Eigen::VectorXd lower, Eigen::VectorXd upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1) throw InvalidArgument("domain needs dimension >= 1");
  if (lower_.size() != upper_.size()) throw InvalidArgument("domain bounds differ in dimension");
  if (!lower_.allFinite() || !upper_.allFinite()) throw InvalidArgument("domain bounds must be finite");
  if (!(lower_.array() < upper_.array()).all()) throw InvalidArgument("domain needs lower < upper on every axis");
}

DomainBox DomainBox::interval(double a, double b) {
  return DomainBox(Eigen::VectorXd::Constant(1, a), Eigen::VectorXd::Constant(1, b));
}

bool DomainBox::contains(PointRef x) const {
  if (x.size() != lower_.size()) return false;
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

Eigen::MatrixXd DomainBox::grid(int per_axis) const { return tensor_grid(lower_, upper_, per_axis); }

bool DomainBox::in_boundary_band(PointRef x, double fraction) const {
  require_same_dimension(x, lower_);
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    const double band = fraction * (upper_[a] - lower_[a]);
    if (x[a] - lower_[a] < band || upper_[a] - x[a] < band) return true;
  }
  return false;
}

double omega(PointRef x, const NodeSet& nodes) {
  require_valid_point(x);
  if (x.size() != nodes.dim()) throw InvalidArgument("point and nodes differ in dimension");
  double w = 1.0;
  for (Eigen::Index k = 0; k < nodes.size(); ++k) w *= (x - nodes.point(k)).norm();
  return w;
}

OmegaProfile omega_profile(const NodeSet& nodes, const DomainBox& domain, int samples_per_axis) {
  if (samples_per_axis < 2) throw InvalidArgument("samples_per_axis must be >= 2");
  if (nodes.dim() != domain.dim()) throw InvalidArgument("nodes and domain differ in dimension");
  OmegaProfile out;
  out.sample_points = domain.grid(samples_per_axis);
  out.w_values.resize(out.sample_points.cols());
  for (Eigen::Index p = 0; p < out.sample_points.cols(); ++p) out.w_values[p] = omega(out.sample_points.col(p), nodes);
  return out;
}

NodeSet chebyshev_nodes(int count, double a, double b) {
  if (count < 1) throw InvalidArgument("chebyshev_nodes needs count >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw InvalidArgument("chebyshev_nodes needs a < b");
  std::vector<double> xs;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int k = 1; k <= count; ++k) {
    // sin form gives exact zeros for symmetric pairs and an exact 0 at the centre.
    const double t = std::sin(M_PI * (2.0 * k - 1.0 - count) / (2.0 * count));
    xs.push_back(mid + half * t);
  }
  return NodeSet::on_line(xs);
}

NodeSet uniform_nodes(int count, double a, double b) {
  if (count < 1) throw InvalidArgument("uniform_nodes needs count >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw InvalidArgument("uniform_nodes needs a < b");
  const Eigen::MatrixXd g = tensor_grid(Eigen::VectorXd::Constant(1, a), Eigen::VectorXd::Constant(1, b), count);
  return NodeSet(g);
}

namespace {

double omega_raw(PointRef x, const Eigen::MatrixXd& nodes) {
  double w = 1.0;
  for (Eigen::Index k = 0; k < nodes.cols(); ++k) w *= (x - nodes.col(k)).norm();
  return w;
}

OmegaMaximum locate_raw(const Eigen::MatrixXd& nodes, const DomainBox& domain, const Eigen::MatrixXd& grid,
                        int per_axis) {
  Eigen::Index best = 0;
  double best_w = -1.0;
  for (Eigen::Index p = 0; p < grid.cols(); ++p) {
    const double w = omega_raw(grid.col(p), nodes);
    if (w > best_w) {
      best_w = w;
      best = p;
    }
  }
  Point x = grid.col(best);
  constexpr double kGolden = 0.6180339887498949;
  for (int a = 0; a < domain.dim(); ++a) {
    const double h = (domain.upper()[a] - domain.lower()[a]) / (per_axis - 1);
    double lo = std::max(domain.lower()[a], x[a] - h);
    double hi = std::min(domain.upper()[a], x[a] + h);
    Point probe = x;
    auto w_at = [&](double t) {
      probe[a] = t;
      return omega_raw(probe, nodes);
    };
    double c = hi - kGolden * (hi - lo);
    double d = lo + kGolden * (hi - lo);
    double wc = w_at(c);
    double wd = w_at(d);
    for (int step = 0; step < 20; ++step) {
      if (wc > wd) {
        hi = d;
        d = c;
        wd = wc;
        c = hi - kGolden * (hi - lo);
        wc = w_at(c);
      } else {
        lo = c;
        c = d;
        wc = wd;
        d = lo + kGolden * (hi - lo);
        wd = w_at(d);
      }
    }
    const double t = wc > wd ? c : d;
    const double wt = std::max(wc, wd);
    if (wt > best_w) {
      best_w = wt;
      x[a] = t;
    }
  }
  return OmegaMaximum{best_w, x};
}

void require_box_nodes(const NodeSet& nodes, const DomainBox& domain) {
  if (nodes.dim() != domain.dim()) throw InvalidArgument("nodes and domain differ in dimension");
}

}  // namespace

OmegaMaximum locate_max_omega(const NodeSet& nodes, const DomainBox& domain, int samples_per_axis) {
  if (samples_per_axis < 2) throw InvalidArgument("samples_per_axis must be >= 2");
  require_box_nodes(nodes, domain);
  return locate_raw(nodes.coords(), domain, domain.grid(samples_per_axis), samples_per_axis);
}

double max_omega(const NodeSet& nodes, const DomainBox& domain, int samples_per_axis) {
  return locate_max_omega(nodes, domain, samples_per_axis).value;
}

MinMaxResult optimize_minmax(const NodeSet& initial, const DomainBox& domain, int iterations, std::uint64_t seed,
                             int samples_per_axis) {
  require_box_nodes(initial, domain);
  if (iterations < 0) throw InvalidArgument("iterations must be >= 0");
  for (Eigen::Index k = 0; k < initial.size(); ++k) {
    if (!domain.contains(initial.point(k))) throw InvalidArgument("initial nodes must lie inside the domain");
  }
  const int per_axis = samples_per_axis > 0 ? samples_per_axis : default_samples_per_axis(domain.dim());
  if (per_axis < 2) throw InvalidArgument("samples_per_axis must be >= 2");
  const Eigen::MatrixXd grid = domain.grid(per_axis);

  Eigen::MatrixXd best = initial.coords();
  OmegaMaximum incumbent = locate_raw(best, domain, grid, per_axis);
  MinMaxResult out{initial, {incumbent.value}};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd width = domain.upper() - domain.lower();
  double sigma = 0.1;
  const Eigen::VectorXd center = 0.5 * (domain.lower() + domain.upper());

  auto admissible = [&](const Eigen::MatrixXd& c) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      if (!domain.contains(c.col(k))) return false;
    }
    return min_pairwise_distance(c) > 0.0;
  };
  auto clamp = [&](Eigen::MatrixXd& c) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      c.col(k) = c.col(k).cwiseMax(domain.lower()).cwiseMin(domain.upper());
    }
  };

  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXd candidate_best;
    OmegaMaximum candidate_max{incumbent.value, incumbent.location};
    auto consider = [&](const Eigen::MatrixXd& c) {
      if (!admissible(c)) return false;
      const OmegaMaximum m = locate_raw(c, domain, grid, per_axis);
      if (m.value < candidate_max.value) {
        candidate_max = m;
        candidate_best = c;
        return true;
      }
      return false;
    };

    // Line searches of each node toward the maximizer and toward its antipode.
    const Point antipode = 2.0 * center - incumbent.location;
    for (Eigen::Index k = 0; k < best.cols(); ++k) {
      for (const Point& target : {incumbent.location, antipode}) {
        double fraction = 0.5;
        for (int step = 0; step < 20; ++step, fraction *= 0.5) {
          Eigen::MatrixXd c = best;
          c.col(k) += fraction * (target - best.col(k));
          clamp(c);
          consider(c);
        }
      }
    }

    // Joint random perturbation with an adaptive step.
    Eigen::MatrixXd c = best;
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      for (Eigen::Index a = 0; a < c.rows(); ++a) c(a, k) += sigma * width[a] * normal(rng);
    }
    clamp(c);
    if (consider(c)) {
      sigma = std::min(2.0 * sigma, 0.5);
    } else {
      sigma = std::max(0.5 * sigma, 1e-9);
    }

    if (candidate_max.value < incumbent.value) {
      best = candidate_best;
      incumbent = candidate_max;
    }
    out.trace.push_back(incumbent.value);
  }
  out.nodes = NodeSet(best);
  return out;
}

double condition_estimate(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("condition_estimate needs a square matrix");
  return estimate_condition(a);
}

}  // namespace dfw
