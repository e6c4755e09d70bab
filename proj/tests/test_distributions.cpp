#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riplab/distributions.hpp"
#include "riplab/errors.hpp"
#include "riplab/parallel.hpp"

using namespace riplab;

TEST_CASE("isotropic_scale closed forms") {
  CHECK(isotropic_scale(DistKind::gaussian, 7) == 1.0);
  CHECK(isotropic_scale(DistKind::laplace_product, 3) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // Monte Carlo oracle values for the stated dimensions.
  CHECK(isotropic_scale(DistKind::uniform_cube_product, 3) ==
        doctest::Approx(1.7320508).epsilon(1e-7));
  CHECK(isotropic_scale(DistKind::uniform_ball, 3) == doctest::Approx(2.2360680).epsilon(1e-7));
  CHECK(isotropic_scale(DistKind::uniform_l1_ball, 2) ==
        doctest::Approx(2.4494897).epsilon(1e-7));
  CHECK_THROWS_AS((void)isotropic_scale(DistKind::weighted_sum, 2), spec_error);
}

TEST_CASE("per-coordinate second moment is 1 (Monte Carlo, 1e6 draws)") {
  // Direct check of the normalization behind isotropic_scale.
  for (DistKind kind : {DistKind::uniform_cube_product, DistKind::uniform_ball,
                        DistKind::uniform_l1_ball, DistKind::laplace_product}) {
    const int N = kind == DistKind::uniform_l1_ball ? 2 : 3;
    const auto spec = DistributionSpec::make(kind, N);
    RandomStream s(2024);
    double sum2 = 0.0;
    const int trials = 1000000;
    for (int t = 0; t < trials; ++t) {
      const Eigen::VectorXd x = sample_vector(spec, s);
      sum2 += x[0] * x[0];
    }
    CAPTURE(to_string(kind));
    CHECK(sum2 / trials == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("gaussian mean squared norm is N") {
  const auto spec = DistributionSpec::make(DistKind::gaussian, 2);
  RandomStream s(5);
  double sum = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) sum += sample_vector(spec, s).squaredNorm();
  CHECK(sum / trials == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("ball draws stay inside the scaled support, off-diagonals small") {
  const auto spec = DistributionSpec::make(DistKind::uniform_ball, 3);
  RandomStream s(17);
  const double radius = std::sqrt(5.0);
  double cross = 0.0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd x = sample_vector(spec, s);
    CHECK(x.norm() <= radius + 1e-12);
    cross += x[0] * x[1];
  }
  CHECK(std::abs(cross / trials) < 0.03);
}

TEST_CASE("l1 ball draws stay inside the scaled l1 support") {
  const int N = 4;
  const auto spec = DistributionSpec::make(DistKind::uniform_l1_ball, N);
  const double radius = isotropic_scale(DistKind::uniform_l1_ball, N);
  RandomStream s(18);
  for (int t = 0; t < 20000; ++t) {
    const Eigen::VectorXd x = sample_vector(spec, s);
    CHECK(x.lpNorm<1>() <= radius + 1e-12);
  }
}

TEST_CASE("weighted_sum with degenerate weights reproduces the base draw") {
  auto base = DistributionSpec::make(DistKind::laplace_product, 5);
  auto spec = DistributionSpec::weighted({1.0}, base);
  RandomStream s1(33);
  RandomStream s2(33);
  const Eigen::VectorXd direct = sample_vector(base, s1);
  const Eigen::VectorXd weighted = sample_vector(spec, s2);
  CHECK((direct - weighted).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("weighted_sum validation") {
  auto base = DistributionSpec::make(DistKind::gaussian, 3);
  CHECK_THROWS_AS(DistributionSpec::weighted({}, base), spec_error);
  auto once = DistributionSpec::weighted({0.6, 0.8}, base);
  CHECK_THROWS_AS(DistributionSpec::weighted({1.0}, once), spec_error);
  DistributionSpec bare;
  bare.kind = DistKind::weighted_sum;
  bare.dimension = 3;
  bare.weights = {1.0};
  CHECK_THROWS_AS(bare.validate(), spec_error);
}

TEST_CASE("sample_matrix is deterministic and rejects empty") {
  const auto spec = DistributionSpec::make(DistKind::gaussian, 2);
  RandomStream s(44);
  const Eigen::MatrixXd a = sample_matrix(spec, 3, s);
  const Eigen::MatrixXd b = sample_matrix(spec, 3, s);
  CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 2);
  CHECK_THROWS_AS((void)sample_matrix(spec, 0, s), argument_error);
}

TEST_CASE("sample_matrix rows match per-row child streams") {
  const auto spec = DistributionSpec::make(DistKind::laplace_product, 4);
  RandomStream s(91);
  const Eigen::MatrixXd A = sample_matrix(spec, 5, s);
  for (int i = 0; i < 5; ++i) {
    RandomStream row = s.child(static_cast<std::uint64_t>(i));
    const Eigen::VectorXd x = sample_vector(spec, row);
    CHECK((A.row(i).transpose() - x).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("empirical Gram diagonal concentrates (laplace 200x100)") {
  const auto spec = DistributionSpec::make(DistKind::laplace_product, 100);
  RandomStream s(7);
  const Eigen::MatrixXd G = sample_matrix(spec, 200, s);
  const Eigen::MatrixXd C = (G.transpose() * G) / 200.0;
  CHECK(C.diagonal().mean() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("isotropy across kinds and dimensions") {
  // Covariance within 0.05 of identity entrywise at 1e5 draws.
  for (DistKind kind : {DistKind::gaussian, DistKind::laplace_product,
                        DistKind::uniform_cube_product, DistKind::uniform_ball,
                        DistKind::uniform_l1_ball}) {
    for (int N : {2, 10, 50}) {
      const auto spec = DistributionSpec::make(kind, N);
      const Eigen::MatrixXd cov = empirical_covariance(spec, 100000, RandomStream(1000), 4);
      CAPTURE(to_string(kind));
      CAPTURE(N);
      CHECK(max_identity_deviation(cov) <= 0.05);
    }
  }
}

TEST_CASE("unit-norm weighted sum of isotropic base is isotropic") {
  auto base = DistributionSpec::make(DistKind::uniform_cube_product, 10);
  auto spec = DistributionSpec::weighted({0.6, -0.8}, base);
  const Eigen::MatrixXd cov = empirical_covariance(spec, 100000, RandomStream(2000), 4);
  CHECK(max_identity_deviation(cov) <= 0.05);
}

TEST_CASE("empirical_covariance is worker-count independent") {
  const auto spec = DistributionSpec::make(DistKind::uniform_ball, 6);
  const Eigen::MatrixXd c1 = empirical_covariance(spec, 20000, RandomStream(3), 1);
  const Eigen::MatrixXd c8 = empirical_covariance(spec, 20000, RandomStream(3), 8);
  CHECK((c1 - c8).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("kind names round trip") {
  for (DistKind kind : {DistKind::gaussian, DistKind::laplace_product,
                        DistKind::uniform_cube_product, DistKind::uniform_ball,
                        DistKind::uniform_l1_ball, DistKind::weighted_sum})
    CHECK(dist_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS((void)dist_kind_from_string("cauchy"), spec_error);
}
