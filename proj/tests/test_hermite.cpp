#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dfw/errors.hpp"
#include "dfw/hermite.hpp"
#include "dfw/linalg.hpp"

using dfw::BoundaryOperatorKind;
using dfw::BoundarySpec;
using dfw::KernelSpec;

namespace {

Eigen::MatrixXd row(std::initializer_list<double> xs) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) m(0, i++) = x;
  return m;
}

BoundarySpec unit_interval_layout() { return BoundarySpec(row({0.5}), row({0.0, 1.0}), row({-1.0, 1.0})); }

// Random layout in the unit square: interior points plus points on the four
// edges with their outward normals.
BoundarySpec random_square_layout(std::mt19937_64& rng, int interior, int per_edge) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  Eigen::MatrixXd in(2, interior);
  for (int i = 0; i < interior; ++i) in.col(i) = Eigen::Vector2d(u(rng), u(rng));
  Eigen::MatrixXd b(2, 4 * per_edge);
  Eigen::MatrixXd n(2, 4 * per_edge);
  for (int k = 0; k < per_edge; ++k) {
    const double t = u(rng);
    b.col(4 * k + 0) = Eigen::Vector2d(t, 0.0);
    n.col(4 * k + 0) = Eigen::Vector2d(0, -1);
    b.col(4 * k + 1) = Eigen::Vector2d(1.0, t);
    n.col(4 * k + 1) = Eigen::Vector2d(1, 0);
    b.col(4 * k + 2) = Eigen::Vector2d(1.0 - t, 1.0);
    n.col(4 * k + 2) = Eigen::Vector2d(0, 1);
    b.col(4 * k + 3) = Eigen::Vector2d(0.0, 1.0 - t);
    n.col(4 * k + 3) = Eigen::Vector2d(-1, 0);
  }
  return BoundarySpec(in, b, n);
}

}  // namespace

TEST(Layout, Validation) {
  EXPECT_THROW(BoundarySpec(row({0.5}), row({0.0}), row({0.5})), dfw::InvalidArgument);
  EXPECT_THROW(BoundarySpec(row({0.5}), row({0.0, 1.0}), row({1.0})), dfw::InvalidArgument);
  EXPECT_THROW(BoundarySpec(row({0.0}), row({0.0}), row({1.0})), dfw::InvalidArgument);
  EXPECT_THROW(BoundarySpec(Eigen::MatrixXd(1, 0), Eigen::MatrixXd(1, 0), Eigen::MatrixXd(1, 0)), dfw::InvalidArgument);
}

TEST(Layout, NearlyCoincidentNodesRejected) {
  EXPECT_THROW(
      {
        const BoundarySpec layout(row({0.5, 0.5 + 1e-16}), Eigen::MatrixXd(1, 0), Eigen::MatrixXd(1, 0));
        dfw::assemble_hermite(layout, KernelSpec::gaussian(1));
      },
      dfw::InvalidArgument);
}

TEST(AssembleHermite, SymmetricOnTheInterval) {
  const dfw::HermiteSystem sys = dfw::assemble_hermite(unit_interval_layout(), KernelSpec::mq(1));
  ASSERT_EQ(sys.matrix.rows(), 5);
  EXPECT_LE(sys.symmetry_defect, 1e-13);
  EXPECT_LE((sys.matrix - sys.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(AssembleHermite, NoBoundaryIsPlainKernelMatrix) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd pts(2, 7);
  for (int k = 0; k < 7; ++k) pts.col(k) = Eigen::Vector2d(u(rng), u(rng));
  Eigen::Matrix2d kappa;
  kappa << 1.5, 0.2, 0.2, 0.5;
  for (const KernelSpec& spec :
       {KernelSpec::mq(0.7), KernelSpec::gaussian(0.9), KernelSpec::mq(0.7).with_anisotropy(dfw::AnisotropyTensor(kappa))}) {
    const dfw::HermiteSystem sys =
        dfw::assemble_hermite(BoundarySpec(pts, Eigen::MatrixXd(2, 0), Eigen::MatrixXd(2, 0)), spec);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) EXPECT_EQ(sys.matrix(i, j), dfw::eval_kernel(spec, pts.col(i), pts.col(j)));
    }
  }
}

TEST(AssembleHermite, SymmetricOnRandomLayouts) {
  std::mt19937_64 rng(99);
  for (int seed = 0; seed < 20; ++seed) {
    const BoundarySpec layout = random_square_layout(rng, 6, 2);
    for (const KernelSpec& spec : {KernelSpec::mq(0.5), KernelSpec::gaussian(0.8), KernelSpec::inverse_mq(0.4)}) {
      const dfw::HermiteSystem sys = dfw::assemble_hermite(layout, spec);
      EXPECT_LE(sys.symmetry_defect, 1e-13 * sys.matrix.cwiseAbs().maxCoeff());
    }
  }
}

TEST(FitHermite, LinearTargetMatchesDenseOracle) {
  const BoundarySpec layout = unit_interval_layout();
  const std::vector<double> interior = {0.5};
  const std::vector<double> dirichlet = {0.0, 1.0};
  const std::vector<double> neumann = {-1.0, 1.0};
  const dfw::HermiteFit fit = dfw::fit_hermite(layout, KernelSpec::mq(1), interior, dirichlet, neumann);
  EXPECT_LE(fit.max_residual, 1e-9);

  // Closed-form MQ derivatives in 1D.
  auto k0 = [](double d) { return std::sqrt(d * d + 1); };
  auto k1 = [](double d) { return d / std::sqrt(d * d + 1); };
  auto k2 = [](double d) { return 1.0 / std::pow(d * d + 1, 1.5); };
  const double xs[3] = {0.5, 0.0, 1.0};
  const double ns[3] = {0.0, -1.0, 1.0};
  Eigen::MatrixXd a(5, 5);
  // Rows/cols: V(0.5), V(0), V(1), N(0), N(1).
  auto point = [&](int i) { return i < 3 ? xs[i] : xs[i - 2]; };
  auto normal = [&](int i) { return i < 3 ? 0.0 : ns[i - 2]; };
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double d = point(i) - point(j);
      const bool vi = i < 3;
      const bool vj = j < 3;
      if (vi && vj) a(i, j) = k0(d);
      if (vi && !vj) a(i, j) = -normal(j) * k1(d);
      if (!vi && vj) a(i, j) = normal(i) * k1(d);
      if (!vi && !vj) a(i, j) = -normal(i) * normal(j) * k2(d);
    }
  }
  Eigen::VectorXd rhs(5);
  rhs << 0.5, 0.0, 1.0, -1.0, 1.0;
  const Eigen::VectorXd beta = a.fullPivLu().solve(rhs);
  EXPECT_LE((fit.model.beta() - beta).cwiseAbs().maxCoeff(), 1e-9 * beta.cwiseAbs().maxCoeff());
  EXPECT_NEAR(dfw::evaluate_hermite(fit.model, Eigen::VectorXd::Constant(1, 0.5)), 0.5, 1e-9);
  const Eigen::VectorXd right = Eigen::VectorXd::Constant(1, 1.0);
  EXPECT_NEAR(dfw::evaluate_hermite(fit.model, Eigen::VectorXd::Constant(1, 1.0), right), 1.0, 1e-9);
}

TEST(FitHermite, ZeroDataGivesZeroModel) {
  const dfw::HermiteFit fit =
      dfw::fit_hermite(unit_interval_layout(), KernelSpec::mq(1), std::vector<double>{0.0},
                       std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 0.0});
  for (Eigen::Index i = 0; i < fit.model.beta().size(); ++i) EXPECT_EQ(fit.model.beta()[i], 0.0);
  EXPECT_EQ(dfw::evaluate_hermite(fit.model, Eigen::VectorXd::Constant(1, 0.3)), 0.0);
}

TEST(FitHermite, SizeMismatchRejected) {
  EXPECT_THROW(dfw::fit_hermite(unit_interval_layout(), KernelSpec::mq(1), std::vector<double>{0.0},
                                std::vector<double>{0.0}, std::vector<double>{0.0, 0.0}),
               dfw::InvalidArgument);
}

TEST(FitHermite, ConstantTargetHasFlatBoundary) {
  std::mt19937_64 rng(4);
  const BoundarySpec layout = random_square_layout(rng, 8, 3);
  const std::vector<double> interior(8, 2.5);
  const std::vector<double> dirichlet(12, 2.5);
  const std::vector<double> neumann(12, 0.0);
  const dfw::HermiteFit fit = dfw::fit_hermite(layout, KernelSpec::mq(0.5), interior, dirichlet, neumann);
  for (Eigen::Index j = 0; j < layout.boundary_count(); ++j) {
    EXPECT_LE(std::abs(dfw::evaluate_hermite(fit.model, layout.boundary().col(j), layout.normals().col(j))), 1e-8);
  }
}

TEST(FitHermite, ReproducesConstraintsAndDerivatives) {
  std::mt19937_64 rng(8);
  auto f = [](const Eigen::VectorXd& x) { return std::sin(2 * x[0]) * std::exp(x[1]); };
  auto grad = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(2 * std::cos(2 * x[0]) * std::exp(x[1]), std::sin(2 * x[0]) * std::exp(x[1]));
  };
  const BoundarySpec layout = random_square_layout(rng, 10, 2);
  std::vector<double> interior, dirichlet, neumann;
  for (Eigen::Index i = 0; i < layout.interior_count(); ++i) interior.push_back(f(layout.interior().col(i)));
  for (Eigen::Index j = 0; j < layout.boundary_count(); ++j) {
    dirichlet.push_back(f(layout.boundary().col(j)));
    neumann.push_back(grad(layout.boundary().col(j)).dot(layout.normals().col(j)));
  }
  const dfw::HermiteFit fit = dfw::fit_hermite(layout, KernelSpec::mq(0.6), interior, dirichlet, neumann);
  ASSERT_LT(fit.condition, 1e10);
  const double scale = 1.0 + 2.0 * std::exp(1.0);
  for (Eigen::Index i = 0; i < layout.interior_count(); ++i) {
    EXPECT_NEAR(dfw::evaluate_hermite(fit.model, layout.interior().col(i)), interior[static_cast<std::size_t>(i)],
                1e-8 * scale);
  }
  for (Eigen::Index j = 0; j < layout.boundary_count(); ++j) {
    EXPECT_NEAR(dfw::evaluate_hermite(fit.model, layout.boundary().col(j)), dirichlet[static_cast<std::size_t>(j)],
                1e-8 * scale);
    EXPECT_NEAR(dfw::evaluate_hermite(fit.model, layout.boundary().col(j), layout.normals().col(j)),
                neumann[static_cast<std::size_t>(j)], 1e-8 * scale);
  }
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI);
  const double h = 1e-5;
  for (int probe = 0; probe < 50; ++probe) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double a = ang(rng);
    const Eigen::Vector2d v(std::cos(a), std::sin(a));
    const Eigen::Vector2d xp = x + h * v;
    const Eigen::Vector2d xm = x - h * v;
    const double fd = (dfw::evaluate_hermite(fit.model, xp) - dfw::evaluate_hermite(fit.model, xm)) / (2 * h);
    EXPECT_NEAR(dfw::evaluate_hermite(fit.model, x, v), fd, 1e-6);
  }
}

TEST(MultiBc, Reductions) {
  std::mt19937_64 rng(6);
  const BoundarySpec layout = random_square_layout(rng, 5, 2);
  const KernelSpec spec = KernelSpec::mq(0.5);
  const auto values = dfw::assemble_multi_bc(layout, spec, dfw::BoundaryOperatorSet::on_all({BoundaryOperatorKind::Value}, 8));
  const Eigen::MatrixXd all = layout.all_nodes();
  ASSERT_EQ(values.matrix.rows(), 13);
  for (int i = 0; i < 13; ++i) {
    for (int j = 0; j < 13; ++j) EXPECT_EQ(values.matrix(i, j), dfw::eval_kernel(spec, all.col(i), all.col(j)));
  }
  const auto both = dfw::assemble_multi_bc(
      layout, spec,
      dfw::BoundaryOperatorSet::on_all({BoundaryOperatorKind::Value, BoundaryOperatorKind::NormalDerivative}, 8));
  EXPECT_EQ(both.matrix, dfw::assemble_hermite(layout, spec).matrix);
}

TEST(MultiBc, LaplacianTraceIsSymmetric) {
  std::mt19937_64 rng(12);
  const BoundarySpec layout = random_square_layout(rng, 5, 2);
  const auto sys = dfw::assemble_multi_bc(
      layout, KernelSpec::gaussian(0.7),
      dfw::BoundaryOperatorSet::on_all(
          {BoundaryOperatorKind::Value, BoundaryOperatorKind::NormalDerivative, BoundaryOperatorKind::LaplacianTrace}, 8));
  EXPECT_EQ(sys.matrix.rows(), 5 + 3 * 8);
  EXPECT_LE(sys.symmetry_defect, 1e-13 * sys.matrix.cwiseAbs().maxCoeff());
}

TEST(MultiBc, LaplacianTraceNeedsSmoothKernel) {
  std::mt19937_64 rng(12);
  const BoundarySpec layout = random_square_layout(rng, 3, 1);
  EXPECT_THROW(dfw::assemble_multi_bc(layout, KernelSpec::laplace(2, 1),
                                      dfw::BoundaryOperatorSet::on_all({BoundaryOperatorKind::LaplacianTrace}, 4)),
               dfw::SmoothnessError);
}

TEST(MultiBc, OperatorSetValidation) {
  using Op = dfw::BoundaryOperator;
  EXPECT_THROW(dfw::BoundaryOperatorSet({}, 2), dfw::InvalidArgument);
  EXPECT_THROW(dfw::BoundaryOperatorSet({Op{BoundaryOperatorKind::Value, {0}}}, 2), dfw::InvalidArgument);
  EXPECT_THROW(dfw::BoundaryOperatorSet({Op{BoundaryOperatorKind::Value, {0, 0, 1}}}, 2), dfw::InvalidArgument);
  EXPECT_THROW(dfw::BoundaryOperatorSet({Op{BoundaryOperatorKind::Value, {0, 2}}}, 2), dfw::InvalidArgument);
  EXPECT_NO_THROW(dfw::BoundaryOperatorSet(
      {Op{BoundaryOperatorKind::Value, {0}}, Op{BoundaryOperatorKind::NormalDerivative, {1}}}, 2));
}

TEST(EdgeEffect, ZeroTargetUsesUnitRatio) {
  dfw::TargetFunction zero{[](dfw::PointRef) { return 0.0; }, {}};
  Eigen::MatrixXd interior(1, 9);
  for (int i = 0; i < 9; ++i) interior(0, i) = 0.1 * (i + 1);
  const BoundarySpec layout(interior, row({0.0, 1.0}), row({-1.0, 1.0}));
  const auto r = dfw::edge_effect_ratio(zero, layout, KernelSpec::mq(1), 0.2);
  EXPECT_EQ(r.ratio, 1.0);
}

TEST(EdgeEffect, SmoothTargetGivesFinitePositiveRatio) {
  dfw::TargetFunction target{[](dfw::PointRef x) { return std::exp(x[0]); },
                             [](dfw::PointRef x) { return Eigen::VectorXd::Constant(1, std::exp(x[0])); }};
  Eigen::MatrixXd interior(1, 9);
  for (int i = 0; i < 9; ++i) interior(0, i) = 0.1 * (i + 1);
  const BoundarySpec layout(interior, row({0.0, 1.0}), row({-1.0, 1.0}));
  const auto r = dfw::edge_effect_ratio(target, layout, KernelSpec::mq(1), 0.2, 201);
  EXPECT_TRUE(std::isfinite(r.ratio));
  EXPECT_GT(r.ratio, 0.0);
  EXPECT_EQ(r.samples.cols(), 201);
  EXPECT_THROW(dfw::edge_effect_ratio(target, layout, KernelSpec::mq(1), 1.0), dfw::InvalidArgument);
}
