#include "targets.hpp"

#include <cmath>

#include "dfw/errors.hpp"

namespace dfw::cli {

std::vector<std::string> target_names() { return {"runge", "exp", "sine", "gaussian", "linear", "constant", "franke"}; }

TargetFunction make_target(const std::string& name) {
  TargetFunction t;
  if (name == "runge") {
    t.value = [](PointRef x) { return 1.0 / (1.0 + 25.0 * x.squaredNorm()); };
    t.gradient = [](PointRef x) -> Eigen::VectorXd {
      const double d = 1.0 + 25.0 * x.squaredNorm();
      return -50.0 * x / (d * d);
    };
  } else if (name == "exp") {
    t.value = [](PointRef x) { return std::exp(x.sum()); };
    t.gradient = [](PointRef x) -> Eigen::VectorXd { return Eigen::VectorXd::Constant(x.size(), std::exp(x.sum())); };
  } else if (name == "sine") {
    t.value = [](PointRef x) { return std::sin(M_PI * x.sum()); };
    t.gradient = [](PointRef x) -> Eigen::VectorXd {
      return Eigen::VectorXd::Constant(x.size(), M_PI * std::cos(M_PI * x.sum()));
    };
  } else if (name == "gaussian") {
    t.value = [](PointRef x) { return std::exp(-4.0 * x.squaredNorm()); };
    t.gradient = [](PointRef x) -> Eigen::VectorXd { return -8.0 * x * std::exp(-4.0 * x.squaredNorm()); };
  } else if (name == "linear") {
    t.value = [](PointRef x) {
      double v = 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) v += static_cast<double>(i + 1) * x[i];
      return v;
    };
    t.gradient = [](PointRef x) -> Eigen::VectorXd {
      return Eigen::VectorXd::LinSpaced(x.size(), 1.0, static_cast<double>(x.size()));
    };
  } else if (name == "constant") {
    t.value = [](PointRef) { return 1.0; };
    t.gradient = [](PointRef x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.size()); };
  } else if (name == "franke") {
    t.value = [](PointRef x) {
      if (x.size() != 2) throw InvalidArgument("target 'franke' is two-dimensional");
      const double a = x[0];
      const double b = x[1];
      return 0.75 * std::exp(-((9 * a - 2) * (9 * a - 2) + (9 * b - 2) * (9 * b - 2)) / 4) +
             0.75 * std::exp(-(9 * a + 1) * (9 * a + 1) / 49 - (9 * b + 1) / 10) +
             0.5 * std::exp(-((9 * a - 7) * (9 * a - 7) + (9 * b - 3) * (9 * b - 3)) / 4) -
             0.2 * std::exp(-(9 * a - 4) * (9 * a - 4) - (9 * b - 7) * (9 * b - 7));
    };
  } else {
    throw InvalidArgument("unknown target '" + name + "'");
  }
  return t;
}

SupportedFunction make_supported(const std::string& name, const Eigen::VectorXd& center, double radius) {
  if (!std::isfinite(radius) || !(radius > 0.0)) throw InvalidArgument("support radius must be positive");
  if (!center.allFinite()) throw InvalidArgument("support center must be finite");
  if (name == "bump") {
    return SupportedFunction{[center, radius](PointRef x) {
                               const double s2 = (x - center).squaredNorm() / (radius * radius);
                               return s2 < 1.0 ? std::pow(1.0 - s2, 3) : 0.0;
                             },
                             center, radius};
  }
  if (name == "ball") {
    const double width = 1e-3 * radius;
    return SupportedFunction{[center, radius, width](PointRef x) {
                               return 0.5 * std::erfc(((x - center).norm() - radius) / width);
                             },
                             center, radius + 10.0 * width};
  }
  throw InvalidArgument("unknown supported function '" + name + "' (expected bump or ball)");
}

}  // namespace dfw::cli
