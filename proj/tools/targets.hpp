#pragma once

#include <string>
#include <vector>

#include "dfw/hermite.hpp"
#include "dfw/transforms.hpp"

namespace dfw::cli {

/// Named analytic test functions usable from config files.
///   runge     1 / (1 + 25 |x|^2)
///   exp       exp(x_1 + ... + x_d)
///   sine      sin(pi (x_1 + ... + x_d))
///   gaussian  exp(-4 |x|^2)
///   linear    1 + sum_i (i + 1) x_i
///   constant  1
///   franke    Franke's function (2D)
TargetFunction make_target(const std::string& name);

std::vector<std::string> target_names();

/// Radial profiles with compact support around `center`:
///   bump  (1 - s^2)^3 for s = |x - center| / radius < 1
///   ball  mollified indicator of the ball of the given radius
SupportedFunction make_supported(const std::string& name, const Eigen::VectorXd& center, double radius);

}  // namespace dfw::cli
