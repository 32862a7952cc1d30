#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dfw/errors.hpp"
#include "dfw/kernels.hpp"
#include "dfw/quadrature.hpp"

using dfw::KernelSpec;
using dfw::MqVariant;
using Eigen::Vector2d;

TEST(LaplaceProfile, Examples) {
  EXPECT_EQ(dfw::laplace_fundamental_profile(1.0, 2, 1), 0.0);
  EXPECT_DOUBLE_EQ(dfw::laplace_fundamental_profile(2.0, 3, 1), 2.0);
  EXPECT_DOUBLE_EQ(dfw::laplace_fundamental_profile(2.0, 3, 2), 8.0);
  EXPECT_DOUBLE_EQ(dfw::laplace_fundamental_profile(2.0, 2, 1), 4.0 * std::log(2.0));
  EXPECT_DOUBLE_EQ(dfw::laplace_fundamental_profile(3.0, 1, 0), 3.0);
  EXPECT_DOUBLE_EQ(dfw::laplace_fundamental_profile(2.0, 4, 1), std::log(2.0));
}

TEST(LaplaceProfile, Origin) {
  EXPECT_EQ(dfw::laplace_fundamental_profile(0.0, 2, 1), 0.0);
  EXPECT_EQ(dfw::laplace_fundamental_profile(0.0, 3, 1), 0.0);
  EXPECT_THROW(dfw::laplace_fundamental_profile(0.0, 2, 0), dfw::SingularityError);
  EXPECT_THROW(dfw::laplace_fundamental_profile(0.0, 3, 0), dfw::SingularityError);
  EXPECT_THROW(dfw::laplace_fundamental_profile(1.0, 2, -1), dfw::InvalidArgument);
}

TEST(MqProfile, Examples) {
  EXPECT_DOUBLE_EQ(dfw::mq_profile(3, 4, MqVariant::Multiquadric), 5.0);
  EXPECT_DOUBLE_EQ(dfw::mq_profile(0, 1, MqVariant::InverseMultiquadric), 1.0);
  EXPECT_EQ(dfw::mq_profile(1, 0, MqVariant::ThinPlate, 1, 2), 0.0);
  EXPECT_THROW(dfw::mq_profile(0, 0, MqVariant::InverseMultiquadric), dfw::SingularityError);
  EXPECT_THROW(dfw::mq_profile(0, 0, MqVariant::ThinPlate, 1, 2), dfw::SingularityError);
}

TEST(MqProfile, ThinPlateLimits) {
  // n = 2: ln of the squared argument doubles the Laplace profile at c = 0.
  for (double r : {0.3, 1.7, 4.0}) {
    EXPECT_NEAR(dfw::mq_profile(r, 0, MqVariant::ThinPlate, 2, 2), 2.0 * dfw::laplace_fundamental_profile(r, 2, 2),
                1e-12 * std::abs(dfw::laplace_fundamental_profile(r, 2, 2)) + 1e-15);
    EXPECT_NEAR(dfw::mq_profile(r, 0, MqVariant::ThinPlate, 2, 3), dfw::laplace_fundamental_profile(r, 3, 2),
                1e-12 * std::pow(r, 3));
  }
  EXPECT_DOUBLE_EQ(dfw::mq_profile(1, 1, MqVariant::ThinPlate, 1, 3), std::sqrt(2.0));
}

TEST(PoissonProfile, Examples) {
  EXPECT_NEAR(dfw::poisson_kernel_profile(0, 1, 1), 0.3183099, 1e-7);
  for (int n : {1, 2, 3}) {
    for (double r : {0.0, 0.4, 3.0}) {
      for (double q : {0.5, 2.0}) {
        const double lhs = dfw::poisson_kernel_profile(r, q, n);
        const double rhs = std::pow(q, -n) * dfw::poisson_kernel_profile(r / q, 1, n);
        EXPECT_NEAR(lhs, rhs, 1e-13 * lhs);
      }
    }
  }
  EXPECT_THROW(dfw::poisson_kernel_profile(1, 0, 1), dfw::InvalidArgument);
}

// Integral over R^n of the radial profile, r = q tan(t) on [0, pi/2).
double poisson_mass(int n, double q) {
  const dfw::QuadratureRule rule = dfw::gauss_legendre(200, 0.0, M_PI / 2);
  const double shell = n == 1 ? 2.0 : 2.0 * M_PI;
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double r = q * std::tan(t);
    const double jac = q / (std::cos(t) * std::cos(t));
    total += rule.weights[i] * jac * std::pow(r, n - 1) * dfw::poisson_kernel_profile(r, q, n);
  }
  return shell * total;
}

TEST(PoissonProfile, UnitMass) {
  for (int n : {1, 2}) {
    for (double q : {0.5, 1.0, 2.0}) EXPECT_NEAR(poisson_mass(n, q), 1.0, 1e-4) << n << " " << q;
  }
  // Truncated line integral of the example.
  const dfw::QuadratureRule rule = dfw::gauss_legendre(400, -std::atan(1e4), std::atan(1e4));
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = std::tan(rule.nodes[i]);
    total += rule.weights[i] * dfw::poisson_kernel_profile(std::abs(x), 1.0, 1) / std::pow(std::cos(rule.nodes[i]), 2);
  }
  EXPECT_NEAR(total, 1.0, 1e-4);
}

TEST(GaussianProfile, Examples) {
  EXPECT_EQ(dfw::gaussian_profile(0, 2), 1.0);
  EXPECT_NEAR(dfw::gaussian_profile(2, 2), 0.3678794, 1e-7);
  EXPECT_DOUBLE_EQ(dfw::gaussian_profile(2, 1), std::exp(-4.0));
  EXPECT_THROW(dfw::gaussian_profile(1, 0), dfw::InvalidArgument);
}

TEST(EvalKernel, Examples) {
  const KernelSpec g = KernelSpec::gaussian(1).with_anisotropy(dfw::AnisotropyTensor::identity(2));
  EXPECT_DOUBLE_EQ(dfw::eval_kernel(g, Vector2d(3, 4), Vector2d(0, 0)), std::exp(-25.0));
  const KernelSpec mq = KernelSpec::mq(0).with_anisotropy(
      dfw::AnisotropyTensor(Vector2d(4, 1).asDiagonal().toDenseMatrix()));
  EXPECT_NEAR(dfw::eval_kernel(mq, Vector2d(2, 0), Vector2d(0, 0)), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(dfw::eval_kernel(KernelSpec::power_distance(3), Vector2d(0, 2), Vector2d(0, 0)), 8.0);
}

TEST(EvalKernel, Radiality) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 2 * M_PI);
  for (const KernelSpec& spec : {KernelSpec::mq(0.7), KernelSpec::inverse_mq(0.7), KernelSpec::laplace(2, 1),
                                 KernelSpec::gaussian(1.3), KernelSpec::poisson(2, 0.5), KernelSpec::mq_tps(2, 1, 0.4)}) {
    const double base = dfw::eval_kernel(spec, Vector2d(1.3, 0), Vector2d(0, 0));
    for (int i = 0; i < 20; ++i) {
      const double t = u(rng);
      const Vector2d c(0.2, -0.4);
      const double v = dfw::eval_kernel(spec, c + 1.3 * Vector2d(std::cos(t), std::sin(t)), c);
      EXPECT_NEAR(v, base, 1e-13 * std::abs(base) + 1e-300);
    }
  }
}

TEST(EvalKernel, SpecValidation) {
  EXPECT_THROW(KernelSpec::gaussian(0).validate(), dfw::InvalidArgument);
  EXPECT_THROW(KernelSpec::poisson(2, -1).validate(), dfw::InvalidArgument);
  EXPECT_THROW(KernelSpec::mq_tps(4, 1, 1).validate(), dfw::InvalidArgument);
  KernelSpec k = KernelSpec::mq(1);
  k.n = 3;
  k.anisotropy = dfw::AnisotropyTensor::identity(2);
  EXPECT_THROW(k.validate(), dfw::InvalidArgument);
  EXPECT_EQ(dfw::parse_family(dfw::family_name(dfw::KernelFamily::MQTPS)), dfw::KernelFamily::MQTPS);
  EXPECT_THROW(dfw::parse_family("spline"), dfw::InvalidArgument);
}

TEST(NormalDerivative, Examples) {
  EXPECT_NEAR(dfw::kernel_normal_derivative(KernelSpec::mq(1), Vector2d(3, 0), Vector2d(0, 0), Vector2d(1, 0)),
              3.0 / std::sqrt(10.0), 1e-15);
  EXPECT_EQ(dfw::kernel_normal_derivative(KernelSpec::gaussian(1), Vector2d(1, 0), Vector2d(0, 0), Vector2d(0, 1)), 0.0);
  for (const KernelSpec& spec : {KernelSpec::mq(1), KernelSpec::gaussian(1), KernelSpec::mq_tps(2, 1, 0.5),
                                 KernelSpec::laplace(2, 1), KernelSpec::inverse_mq(2)}) {
    EXPECT_EQ(dfw::kernel_normal_derivative(spec, Vector2d(0.5, 0.5), Vector2d(0.5, 0.5), Vector2d(0, 1)), 0.0);
  }
  EXPECT_THROW(dfw::kernel_normal_derivative(KernelSpec::laplace(2, 0), Vector2d(0, 0), Vector2d(0, 0), Vector2d(0, 1)),
               dfw::SmoothnessError);
  EXPECT_THROW(dfw::kernel_normal_derivative(KernelSpec::mq(1), Vector2d(1, 0), Vector2d(0, 0), Vector2d(0, 1.1)),
               dfw::InvalidArgument);
}

TEST(NormalDerivative, MatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> radius(0.1, 10.0);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  Eigen::Matrix2d kappa;
  kappa << 2.0, 0.3, 0.3, 0.7;
  const dfw::AnisotropyTensor tensor(kappa);
  const std::vector<KernelSpec> specs = {KernelSpec::mq(1.5),           KernelSpec::inverse_mq(1.5),
                                         KernelSpec::gaussian(6.0),     KernelSpec::poisson(2, 1.0),
                                         KernelSpec::mq_tps(2, 1, 0.5), KernelSpec::mq_tps(3, 1, 0.5),
                                         KernelSpec::laplace(2, 1),     KernelSpec::laplace(3, 2),
                                         KernelSpec::mq(1.5).with_anisotropy(tensor)};
  const double h = 1e-5;
  for (const KernelSpec& spec : specs) {
    for (int trial = 0; trial < 30; ++trial) {
      const double r = radius(rng);
      const double t = angle(rng);
      const double a = angle(rng);
      const Vector2d c(0.1, 0.2);
      const Vector2d x = c + r * Vector2d(std::cos(t), std::sin(t));
      const Vector2d n(std::cos(a), std::sin(a));
      const double fd = (dfw::eval_kernel(spec, x + h * n, c) - dfw::eval_kernel(spec, x - h * n, c)) / (2 * h);
      // Relative slack for kernels that grow like r^3 ln r on [0.1, 10].
      const double scale = std::max(1.0, std::abs(dfw::eval_kernel(spec, x, c)) / 100.0);
      EXPECT_NEAR(dfw::kernel_normal_derivative(spec, x, c, n), fd, 1e-6 * scale)
          << dfw::family_name(spec.family) << " r=" << r;
    }
  }
}

TEST(Differentiator, LaplacianMatchesFiniteDifferences) {
  const double h = 1e-3;
  for (const KernelSpec& spec : {KernelSpec::mq(1.0), KernelSpec::gaussian(1.5), KernelSpec::mq_tps(2, 2, 0.5)}) {
    const dfw::KernelDifferentiator diff(spec);
    const Vector2d d(0.4, -0.7);
    double lap = 0.0;
    for (int a = 0; a < 2; ++a) {
      Vector2d e = Vector2d::Zero();
      e[a] = h;
      lap += (diff.value(d + e) - 2 * diff.value(d) + diff.value(d - e)) / (h * h);
    }
    EXPECT_NEAR(diff.laplacian(d), lap, 1e-5 * std::max(1.0, std::abs(lap)));
    // Gradient of the Laplacian along x by a central difference of laplacian().
    const Vector2d ex(1, 0);
    const double g = (diff.laplacian(d + 1e-5 * ex) - diff.laplacian(d - 1e-5 * ex)) / 2e-5;
    EXPECT_NEAR(diff.laplacian_directional(d, ex), g, 1e-6 * std::max(1.0, std::abs(g)));
    // Bilaplacian as the Laplacian of laplacian().
    double bil = 0.0;
    for (int a = 0; a < 2; ++a) {
      Vector2d e = Vector2d::Zero();
      e[a] = h;
      bil += (diff.laplacian(d + e) - 2 * diff.laplacian(d) + diff.laplacian(d - e)) / (h * h);
    }
    EXPECT_NEAR(diff.bilaplacian(d), bil, 1e-4 * std::max(1.0, std::abs(bil)));
  }
}

TEST(Differentiator, AnisotropicLaplacianRejected) {
  const KernelSpec spec = KernelSpec::mq(1).with_anisotropy(dfw::AnisotropyTensor::identity(2));
  const dfw::KernelDifferentiator diff(spec);
  EXPECT_THROW(diff.laplacian(Vector2d(1, 0)), dfw::InvalidArgument);
}

TEST(GeodesicReduction, IdentityTensorMatchesIsotropic) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  const std::vector<KernelSpec> families = {KernelSpec::laplace(2, 1), KernelSpec::mq(0.8),
                                            KernelSpec::inverse_mq(0.8), KernelSpec::mq_tps(2, 1, 0.3),
                                            KernelSpec::poisson(2, 0.6),  KernelSpec::gaussian(1.1)};
  for (const KernelSpec& iso : families) {
    const KernelSpec geo = iso.with_anisotropy(dfw::AnisotropyTensor::identity(2));
    for (int i = 0; i < 100; ++i) {
      const Vector2d x(u(rng), u(rng));
      const Vector2d c(u(rng), u(rng));
      const double a = dfw::eval_kernel(iso, x, c);
      EXPECT_NEAR(dfw::eval_kernel(geo, x, c), a, 1e-14 * std::abs(a));
    }
  }
}

TEST(GaussianMatrix, PositiveDefinite) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd pts(2, 10);
    for (int k = 0; k < 10; ++k) pts.col(k) = Vector2d(u(rng), u(rng));
    Eigen::MatrixXd a(10, 10);
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) a(i, j) = dfw::eval_kernel(KernelSpec::gaussian(0.5), pts.col(i), pts.col(j));
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}
