#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "riplab/distributions.hpp"
#include "riplab/errors.hpp"
#include "riplab/sparse_metrics.hpp"

using namespace riplab;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd M(2, 2);
  M << a, b, c, d;
  return M;
}

}  // namespace

TEST_CASE("operator_norm examples") {
  CHECK(operator_norm(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
  // Roots of the characteristic polynomial of A^T A = [[10,14],[14,20]].
  CHECK(operator_norm(mat2(1, 2, 3, 4)) == doctest::Approx(5.4649857042190426).epsilon(1e-10));
  Eigen::MatrixXd row(1, 2);
  row << 3, 4;
  CHECK(operator_norm(row) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("top_m_energy examples and splitting property") {
  Eigen::VectorXd x(3);
  x << 3, -1, 2;
  CHECK(top_m_energy(x, 2) == doctest::Approx(std::sqrt(13.0)).epsilon(1e-12));
  CHECK(top_m_energy(x, 3) == doctest::Approx(x.norm()).epsilon(1e-12));
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  CHECK(top_m_energy(ones, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)top_m_energy(x, 0), argument_error);
  CHECK_THROWS_AS((void)top_m_energy(x, 4), argument_error);

  // Sum of all squared order statistics equals |x|^2.
  RandomStream s(5);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd v(8);
    for (int i = 0; i < 8; ++i) v[i] = s.next_gaussian();
    double sum = 0.0;
    for (int ell = 1; ell <= 8; ++ell) {
      const double o = order_statistic(v, ell);
      sum += o * o;
    }
    CHECK(sum == doctest::Approx(v.squaredNorm()).epsilon(1e-12));
    for (int m = 1; m < 8; ++m) {
      const double head = top_m_energy(v, m);
      CHECK(head <= v.norm() + 1e-12);
      CHECK(top_m_energy(v, m + 1) >= head - 1e-12);
    }
  }
}

TEST_CASE("order_statistic examples") {
  Eigen::VectorXd x(3);
  x << 3, -1, 2;
  CHECK(order_statistic(x, 1) == 3.0);
  CHECK(order_statistic(x, 2) == 2.0);
  CHECK(order_statistic(x, 3) == 1.0);
  Eigen::VectorXd ties(2);
  ties << -5, 5;
  CHECK(order_statistic(ties, 2) == 5.0);
  CHECK_THROWS_AS((void)order_statistic(x, 0), argument_error);
}

TEST_CASE("delta_m_exact examples") {
  const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK(delta_m_exact(I2, 1).value == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::MatrixXd D = mat2(2, 0, 0, 1);
  const DeltaReport r1 = delta_m_exact(D, 1);
  CHECK(r1.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r1.support == std::vector<int>{0});
  CHECK(r1.side == DeltaSide::upper);

  const DeltaReport r2 = delta_m_exact(D, 2);
  CHECK(r2.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r2.side == DeltaSide::upper);
  CHECK(r2.eigenvalue == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("delta_m_exact dominates random sparse probes") {
  // Brute-force oracle: max over random 2-sparse unit vectors of ||Ax|^2-1|.
  RandomStream s(77);
  const auto spec = DistributionSpec::make(DistKind::gaussian, 8);
  Eigen::MatrixXd A = sample_matrix(spec, 6, s) / std::sqrt(6.0);
  const DeltaReport report = delta_m_exact(A, 2);
  double probe_max = 0.0;
  RandomStream probes(78);
  for (int t = 0; t < 100000; ++t) {
    const auto J = probes.sample_subset(8, 2);
    const double angle = 6.283185307179586 * probes.next_unit();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
    x[J[0]] = std::cos(angle);
    x[J[1]] = std::sin(angle);
    probe_max = std::max(probe_max, std::abs((A * x).squaredNorm() - 1.0));
  }
  CHECK(report.value >= probe_max - 1e-12);
  CHECK(report.value - probe_max <= 1e-3);
}

TEST_CASE("delta cap error names the fallback") {
  EnumerationLimits limits;
  limits.delta_cap = 10;
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(8, 8);
  CHECK_THROWS_AS((void)delta_m_exact(A, 4, limits), enumeration_cap_error);
  CHECK_THROWS_WITH_AS((void)delta_m_exact(A, 4, limits),
                       doctest::Contains("delta_m_sampled"), enumeration_cap_error);
}

TEST_CASE("delta_m_sampled is a lower bound matching exact on small cases") {
  RandomStream s(12);
  const auto spec = DistributionSpec::make(DistKind::laplace_product, 6);
  Eigen::MatrixXd A = sample_matrix(spec, 5, s) / std::sqrt(5.0);
  const DeltaReport exact = delta_m_exact(A, 2);
  const DeltaReport sampled = delta_m_sampled(A, 2, 400, RandomStream(13));
  CHECK(sampled.method == DeltaMethod::support_sampled);
  CHECK(sampled.value <= exact.value + 1e-12);
  // 400 draws out of 15 supports: all supports almost surely seen.
  CHECK(sampled.value == doctest::Approx(exact.value).epsilon(1e-12));
}

TEST_CASE("gamma_km_exact on the worked 2x2 example") {
  const Eigen::MatrixXd A = mat2(1, 2, 3, 4);

  const GammaCertificate c11 = gamma_km_exact(A, 1, 1);
  CHECK(c11.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c11.rows == std::vector<int>{1});
  CHECK(c11.support == std::vector<int>{1});

  const GammaCertificate c12 = gamma_km_exact(A, 1, 2);
  CHECK(c12.value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(c12.rows == std::vector<int>{1});

  const GammaCertificate c22 = gamma_km_exact(A, 2, 2);
  CHECK(c22.value == doctest::Approx(5.4649857042190426).epsilon(1e-10));

  const GammaCertificate c21 = gamma_km_exact(A, 2, 1);
  CHECK(c21.value == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));

  for (const auto* cert : {&c11, &c12, &c22, &c21}) {
    CHECK(certificate_residual(*cert, A) <= 1e-9);
    CHECK(cert->direction.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gamma certificate direction vanishes off its support") {
  RandomStream s(3);
  const auto spec = DistributionSpec::make(DistKind::gaussian, 7);
  const Eigen::MatrixXd A = sample_matrix(spec, 5, s);
  const GammaCertificate cert = gamma_km_exact(A, 2, 3);
  for (int j = 0; j < 7; ++j) {
    const bool in_support =
        std::find(cert.support.begin(), cert.support.end(), j) != cert.support.end();
    if (!in_support) CHECK(cert.direction[j] == 0.0);
  }
}

TEST_CASE("gamma cap error") {
  EnumerationLimits limits;
  limits.gamma_cap = 10;
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(8, 8);
  CHECK_THROWS_AS((void)gamma_km_exact(A, 4, 4, limits), enumeration_cap_error);
}

TEST_CASE("gamma_km_heuristic trivial and worked examples") {
  const Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);
  const GammaCertificate id = gamma_km_heuristic(I4, 1, 1, 3, RandomStream(1));
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::MatrixXd A = mat2(1, 2, 3, 4);
  const GammaCertificate c = gamma_km_heuristic(A, 1, 2, 5, RandomStream(2));
  CHECK(c.value == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(c.method == GammaMethod::heuristic);
  CHECK(certificate_residual(c, A) <= 1e-9);
}

TEST_CASE("heuristic never exceeds exact and usually matches") {
  // Oracle: full enumeration on seeded 8x10 Gaussian matrices.
  const auto spec = DistributionSpec::make(DistKind::gaussian, 10);
  int matched = 0;
  const int instances = 12;
  for (int seed = 0; seed < instances; ++seed) {
    const Eigen::MatrixXd A = sample_matrix(spec, 8, RandomStream(100 + seed));
    const GammaCertificate exact = gamma_km_exact(A, 2, 2);
    const GammaCertificate heur = gamma_km_heuristic(A, 2, 2, 20, RandomStream(200 + seed));
    CHECK(heur.value <= exact.value * (1.0 + 1e-9));
    if (heur.value >= 0.999 * exact.value) ++matched;
  }
  CHECK(matched >= instances - 1);
}

TEST_CASE("gamma monotonicity and bracketing on a random matrix") {
  RandomStream s(31);
  const auto spec = DistributionSpec::make(DistKind::uniform_cube_product, 8);
  const Eigen::MatrixXd A = sample_matrix(spec, 6, s);
  const double smax = operator_norm(A);
  const double maxabs = A.cwiseAbs().maxCoeff();

  double prev_km[9] = {0};
  for (int k = 1; k <= 6; ++k) {
    double prev_m = 0.0;
    for (int m = 1; m <= 8; ++m) {
      const double g = gamma_km_exact(A, k, m).value;
      CHECK(g >= prev_m - 1e-12);          // nondecreasing in m
      CHECK(g >= prev_km[m] - 1e-12);      // nondecreasing in k
      CHECK(g >= maxabs - 1e-12);
      CHECK(g <= smax + 1e-9);
      prev_m = g;
      prev_km[m] = g;
    }
  }
  CHECK(gamma_km_exact(A, 1, 1).value == doctest::Approx(maxabs).epsilon(1e-12));
  CHECK(gamma_km_exact(A, 6, 8).value == doctest::Approx(smax).epsilon(1e-10));
}

TEST_CASE("delta is at least gamma_nm^2 - 1") {
  RandomStream s(41);
  const auto spec = DistributionSpec::make(DistKind::gaussian, 8);
  const Eigen::MatrixXd A = sample_matrix(spec, 6, s) / std::sqrt(6.0);
  for (int m = 1; m <= 4; ++m) {
    const double gamma = gamma_km_exact(A, 6, m).value;
    const double delta = delta_m_exact(A, m).value;
    if (gamma >= 1.0) CHECK(delta >= gamma * gamma - 1.0 - 1e-9);
  }
}

TEST_CASE("self_consistent_k worked examples") {
  const Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);
  CHECK(self_consistent_k(I4, 1, 1.0, GammaMethod::exact, RandomStream(1)) == 1);
  CHECK(self_consistent_k(2.0 * I4, 1, 1.0, GammaMethod::exact, RandomStream(1)) == 4);
  // A bound so large nothing qualifies.
  const double B = 10.0 * 2.0 * std::sqrt(4.0 * 1.0);
  CHECK(self_consistent_k(2.0 * I4, 1, B, GammaMethod::exact, RandomStream(1)) == 0);
  CHECK_THROWS_AS(
      (void)self_consistent_k(I4, 1, 0.5, GammaMethod::exact, RandomStream(1)),
      argument_error);
}

TEST_CASE("self_consistent_k heuristic agrees with exact on small instances") {
  const auto spec = DistributionSpec::make(DistKind::gaussian, 6);
  for (int seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd A = sample_matrix(spec, 5, RandomStream(300 + seed));
    const int ke = self_consistent_k(A, 2, 1.0, GammaMethod::exact, RandomStream(1));
    const int kh = self_consistent_k(A, 2, 1.0, GammaMethod::heuristic, RandomStream(1), 20);
    CHECK(ke == kh);
  }
}

TEST_CASE("k_prime examples") {
  const KPrimeResult a = k_prime(2, 16, 16);
  CHECK(a.value == 2);
  CHECK_FALSE(a.saturated);

  const KPrimeResult b = k_prime(1, 12, 12);
  CHECK(b.value == 1);
  CHECK_FALSE(b.saturated);

  const KPrimeResult c = k_prime(4, 8, 16);
  CHECK(c.value == 8);
  CHECK(c.saturated);
}

TEST_CASE("lambda_threshold examples") {
  // Direct evaluation oracles.
  CHECK(lambda_threshold(2, 4, 8, 16) == doctest::Approx(7.9280773755782419).epsilon(1e-12));
  CHECK(lambda_threshold(1, 1, 1, 1) == doctest::Approx(1.3066721826587782).epsilon(1e-12));
  // lambda(k,m,n,2N) - lambda(k,m,n,N) = sqrt(loglog 3m) sqrt(m) log 2.
  const double diff = lambda_threshold(2, 4, 8, 32) - lambda_threshold(2, 4, 8, 16);
  const double expect = std::sqrt(std::log(std::log(12.0))) * 2.0 * std::log(2.0);
  CHECK(diff == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS((void)lambda_threshold(3, 1, 2, 4), argument_error);
}

TEST_CASE("enumeration is worker-count independent") {
  RandomStream s(55);
  const auto spec = DistributionSpec::make(DistKind::gaussian, 9);
  const Eigen::MatrixXd A = sample_matrix(spec, 7, s);
  const GammaCertificate g1 = gamma_km_exact(A, 3, 3, {}, 1);
  const GammaCertificate g8 = gamma_km_exact(A, 3, 3, {}, 8);
  CHECK(g1.value == g8.value);
  CHECK(g1.rows == g8.rows);
  CHECK(g1.support == g8.support);
  const DeltaReport d1 = delta_m_exact(A, 3, {}, 1);
  const DeltaReport d8 = delta_m_exact(A, 3, {}, 8);
  CHECK(d1.value == d8.value);
  CHECK(d1.support == d8.support);
}
