#pragma once

#include <Eigen/Dense>

namespace dfw {

/// Condition estimates above this make a fit fail.
inline constexpr double kConditionLimit = 1e14;
/// Condition estimates above this are reported with a warning flag.
inline constexpr double kConditionWarning = 1e10;

/// 2-norm condition estimate sigma_max / sigma_min of a matrix with
/// rows >= cols, by power iteration on A^T A and inverse iteration through a
/// QR factor. Exact for diagonal matrices. Returns +infinity when the smallest
/// singular value is below 1e-300 or the factorization breaks down.
double estimate_condition(const Eigen::MatrixXd& a);

/// Solves a square system by partial-pivot LU after checking the condition
/// estimate against kConditionLimit (IllConditionedError otherwise).
struct LinearSolve {
  Eigen::VectorXd solution;
  double condition = 1.0;
};

LinearSolve solve_square(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* what);

/// Minimum-norm least-squares solution via a complete orthogonal
/// decomposition, after the same condition check.
LinearSolve solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* what);

}  // namespace dfw
