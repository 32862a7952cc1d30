#include "dfw/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dfw/errors.hpp"

namespace dfw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIterations = 20000;
constexpr double kTolerance = 1e-10;

Eigen::VectorXd start_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  return v.normalized();
}

bool is_diagonal(const Eigen::MatrixXd& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j && a(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

double estimate_condition(const Eigen::MatrixXd& a) {
  if (a.rows() < a.cols() || a.cols() == 0) {
    throw InvalidArgument("condition estimate needs a nonempty matrix with rows >= cols");
  }
  if (!a.allFinite()) throw InvalidArgument("condition estimate of a non-finite matrix");

  if (is_diagonal(a)) {
    const Eigen::VectorXd d = a.diagonal().cwiseAbs();
    const double lo = d.minCoeff();
    if (lo < 1e-300) return kInf;
    return d.maxCoeff() / lo;
  }

  // Largest eigenvalue of A^T A.
  Eigen::VectorXd v = start_vector(a.cols());
  double lambda_max = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::VectorXd av = a * v;
    const double next = av.squaredNorm();
    Eigen::VectorXd w = a.transpose() * av;
    const double norm = w.norm();
    if (norm == 0.0) return kInf;
    v = w / norm;
    const bool done = std::abs(next - lambda_max) <= kTolerance * next;
    lambda_max = next;
    if (done) break;
  }

  // Smallest eigenvalue of A^T A = R^T R by inverse iteration.
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    if (r(i, i) == 0.0) return kInf;
  }
  v = start_vector(a.cols());
  double lambda_min = kInf;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::VectorXd y = r.transpose().triangularView<Eigen::Lower>().solve(v);
    const Eigen::VectorXd x = r.triangularView<Eigen::Upper>().solve(y);
    const double norm = x.norm();
    if (!std::isfinite(norm) || norm == 0.0) return kInf;
    // Rayleigh quotient of the inverse: v . (A^T A)^{-1} v with |v| = 1.
    const double inv = v.dot(x);
    const double next = inv > 0.0 ? 1.0 / inv : 1.0 / norm;
    v = x / norm;
    const bool done = std::abs(next - lambda_min) <= kTolerance * next;
    lambda_min = next;
    if (done) break;
  }
  if (!(lambda_min > 0.0) || !std::isfinite(lambda_min)) return kInf;
  const double sigma_min = std::sqrt(lambda_min);
  if (sigma_min < 1e-300) return kInf;
  return std::max(1.0, std::sqrt(lambda_max) / sigma_min);
}

namespace {

double checked_condition(const Eigen::MatrixXd& a, const char* what) {
  const double cond = estimate_condition(a);
  if (!(cond <= kConditionLimit)) {
    throw IllConditionedError(std::string(what) + ": system is numerically singular (condition estimate " +
                                  std::to_string(cond) + ")",
                              cond);
  }
  return cond;
}

}  // namespace

LinearSolve solve_square(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* what) {
  if (a.rows() != a.cols() || a.rows() != rhs.size()) throw InvalidArgument(std::string(what) + ": size mismatch");
  LinearSolve out;
  out.condition = checked_condition(a, what);
  out.solution = a.partialPivLu().solve(rhs);
  if (!out.solution.allFinite()) throw IllConditionedError(std::string(what) + ": solve produced non-finite values", out.condition);
  return out;
}

LinearSolve solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* what) {
  if (a.rows() != rhs.size()) throw InvalidArgument(std::string(what) + ": size mismatch");
  LinearSolve out;
  out.condition = checked_condition(a, what);
  out.solution = a.completeOrthogonalDecomposition().solve(rhs);
  if (!out.solution.allFinite()) throw IllConditionedError(std::string(what) + ": solve produced non-finite values", out.condition);
  return out;
}

}  // namespace dfw
