#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "riplab/random_stream.hpp"

namespace riplab {

/// Largest singular value, relative accuracy 1e-10 (symmetric eigensolve on
/// the smaller Gram matrix).
double operator_norm(const Eigen::MatrixXd& A);

/// sqrt(sum of the m largest squared coordinates): the exact supremum of
/// |P_I x| over coordinate projections of rank m.
double top_m_energy(const Eigen::VectorXd& x, int m);

/// ell-th largest absolute coordinate (1-based ell).
double order_statistic(const Eigen::VectorXd& x, int ell);

enum class GammaMethod { exact, heuristic };
const char* to_string(GammaMethod method);

/// A value of Gamma_{k,m} together with its witness: row set I, support J,
/// and the unit direction y (supported on J) with
/// value^2 = sum_{i in I} <row_i, y>^2.
struct GammaCertificate {
  double value = 0.0;
  std::vector<int> rows;     // I, 0-based, sorted, |I| = k
  std::vector<int> support;  // J, 0-based, sorted, |J| = m
  Eigen::VectorXd direction; // y, length N
  GammaMethod method = GammaMethod::exact;
};

/// Residual of the certificate identity value^2 = sum_{i in I} <row_i, y>^2,
/// relative to max(1, value^2).
double certificate_residual(const GammaCertificate& cert, const Eigen::MatrixXd& A);

enum class DeltaSide { upper, lower };
enum class DeltaMethod { exact, support_sampled };

/// delta_m report: value = max over supports J of
/// max(lambda_max(A_J^T A_J) - 1, 1 - lambda_min(A_J^T A_J)), with witness.
struct DeltaReport {
  double value = 0.0;
  std::vector<int> support;        // witness J
  double eigenvalue = 0.0;         // extreme eigenvalue attaining the value
  DeltaSide side = DeltaSide::upper;
  DeltaMethod method = DeltaMethod::exact;
  std::uint64_t supports_checked = 0;
};

struct EnumerationLimits {
  std::uint64_t delta_cap = 1000000;    // supports for delta_m_exact
  std::uint64_t gamma_cap = 10000000;   // (I,J) pairs for gamma_km_exact
};

/// Exact RIP constant of the (already normalized) matrix by enumerating all
/// binomial(N, m) supports.  Throws enumeration_cap_error above the cap,
/// pointing at delta_m_sampled.
DeltaReport delta_m_exact(const Eigen::MatrixXd& A, int m,
                          const EnumerationLimits& limits = {}, int workers = 1);

/// Same per-support computation over num_supports random supports; the
/// result is a lower bound, flagged support_sampled.
DeltaReport delta_m_sampled(const Eigen::MatrixXd& A, int m, std::uint64_t num_supports,
                            RandomStream stream, int workers = 1);

/// Exact Gamma_{k,m}: max over all (I, J) of the top singular value of the
/// k x m submatrix, by full enumeration under the cap.
GammaCertificate gamma_km_exact(const Eigen::MatrixXd& A, int k, int m,
                                const EnumerationLimits& limits = {}, int workers = 1);

/// Certified lower bound on Gamma_{k,m} by alternating maximization: pick the
/// k best rows for the current m-sparse direction, then one thresholded power
/// step for the direction; best objective over all iterations and restarts.
/// Restart 0 starts from the thresholded leading right singular vector; later
/// restarts are random.  warm_start, when given, seeds one extra restart.
GammaCertificate gamma_km_heuristic(const Eigen::MatrixXd& A, int k, int m, int restarts,
                                    RandomStream stream,
                                    const Eigen::VectorXd* warm_start = nullptr);

/// Largest k in {1..n} with k <= (Gamma_{k,m}/B)^2; 0 when none qualifies.
/// Heuristic mode reuses each certificate's direction as the next warm start.
int self_consistent_k(const Eigen::MatrixXd& A, int m, double B, GammaMethod method,
                      RandomStream stream, int restarts = 10,
                      const EnumerationLimits& limits = {}, int workers = 1);

struct KPrimeResult {
  int value = 0;
  bool saturated = false;  // no ell <= n qualifies; value carries n
};

/// Smallest ell in {1..n} with m log(eN/m) <= ell log(en/ell); saturated(n)
/// when even ell = n fails.
KPrimeResult k_prime(int m, int n, int N);

/// sqrt(loglog(3m)) sqrt(m) log(eN/m) + sqrt(k) log(en/k).
double lambda_threshold(int k, int m, int n, int N);

}  // namespace riplab
