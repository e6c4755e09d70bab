#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "riplab/distributions.hpp"
#include "riplab/linprog.hpp"
#include "riplab/sparse_metrics.hpp"
#include "riplab/tail_curves.hpp"

namespace riplab {

struct BasisPursuitResult {
  Eigen::VectorXd z;
  double objective = 0.0;  // ||z||_1
  double residual = 0.0;   // ||Az - b||_2
  double gap = 0.0;
  int iterations = 0;
};

/// min ||z||_1 subject to ||Az - b||_2 <= tol * max(1, ||b||_2).
///
/// tol = 0 runs the interior point LP (duality gap <= 1e-9); tol > 0 runs the
/// operator-splitting path.  Rank-deficient A with consistent b is reduced to
/// an independent row subset; inconsistent b raises infeasible_error; hitting
/// the iteration cap raises nonconvergence_error carrying the best iterate.
BasisPursuitResult basis_pursuit(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 double tol = 0.0);

/// One recovery instance: the planted signal, the solver output, and whether
/// the signal was recovered to relative sup-norm 1e-6.
struct RecoveryTrial {
  int n = 0, N = 0, m = 0;
  std::vector<int> support;
  std::vector<int> signs;  // +1/-1 per support entry
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  bool success = false;
  double residual = 0.0;  // ||A z - A x||_2
  std::string failure_reason;
};

struct RecoverySummary {
  int n = 0, N = 0, m = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<RecoveryTrial> records;
};

/// Per trial: draw Gamma, plant a unit m-sparse signal with +-1/sqrt(m)
/// entries on a uniform support, and run basis pursuit on (Gamma/sqrt(n),
/// Gamma x/sqrt(n)).  Solver errors are recorded as failures with a reason.
RecoverySummary recovery_experiment(const DistributionSpec& spec, int n, int N, int m,
                                    std::uint64_t trials, RandomStream stream, int workers = 1);

struct DeltaEnsemble {
  std::vector<double> values;  // one delta_m(Gamma/sqrt(n)) per trial
  double median = 0.0;
  double q90 = 0.0;
  DeltaMethod method = DeltaMethod::exact;
};

/// Independent draws of the RIP constant of Gamma/sqrt(n).
DeltaEnsemble delta_m_ensemble(const DistributionSpec& spec, int n, int m, std::uint64_t trials,
                               DeltaMethod method, RandomStream stream, int workers = 1,
                               const EnumerationLimits& limits = {},
                               std::uint64_t num_supports = 20000);

/// Midpoint median of a sample.
double sample_median(std::vector<double> values);
/// Nearest-rank quantile of a sample (q in (0,1]).
double sample_quantile(std::vector<double> values, double q);

}  // namespace riplab
