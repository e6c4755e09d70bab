#include "riplab/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "riplab/parallel.hpp"

namespace riplab {

BasisPursuitResult basis_pursuit(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 double tol) {
  if (A.rows() < 1 || A.cols() < 1) throw argument_error("basis_pursuit: empty matrix");
  if (A.rows() > A.cols()) throw argument_error("basis_pursuit: requires n <= N");
  if (b.size() != A.rows()) throw argument_error("basis_pursuit: dimension mismatch");
  if (tol < 0.0) throw argument_error("basis_pursuit: tol must be nonnegative");
  if (!A.allFinite() || !b.allFinite())
    throw argument_error("basis_pursuit: entries must be finite");

  const Eigen::Index n = A.rows();

  // Degenerate-rank path: reduce to an independent row subset when b is
  // consistent, fail otherwise.
  Eigen::MatrixXd Awork = A;
  Eigen::VectorXd bwork = b;
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    if (rank < n) {
      const Eigen::VectorXd z_ls = A.colPivHouseholderQr().solve(b);
      const double res = (A * z_ls - b).norm();
      if (res > 1e-8 * (1.0 + b.norm()))
        throw infeasible_error("basis_pursuit: rank-deficient A with inconsistent b");
      const auto& perm = qr.colsPermutation().indices();
      Awork.resize(rank, A.cols());
      bwork.resize(rank);
      for (Eigen::Index i = 0; i < rank; ++i) {
        Awork.row(i) = A.row(perm[i]);
        bwork[i] = b[perm[i]];
      }
    }
  }

  const double eps = tol * std::max(1.0, b.norm());
  L1MinResult lp;
  if (tol == 0.0)
    lp = l1min_equality(Awork, bwork);
  else
    lp = l1min_ball(Awork, bwork, eps);

  const double feas_limit = std::max(eps, 1e-8 * (1.0 + b.norm()));
  const double residual = (A * lp.z - b).norm();
  if (!lp.converged || residual > feas_limit)
    throw nonconvergence_error("basis_pursuit: iteration cap exceeded before tolerances", lp.z);

  BasisPursuitResult out;
  out.z = lp.z;
  out.objective = lp.objective;
  out.residual = residual;
  out.gap = lp.gap;
  out.iterations = lp.iterations;
  return out;
}

RecoverySummary recovery_experiment(const DistributionSpec& spec, int n, int N, int m,
                                    std::uint64_t trials, RandomStream stream, int workers) {
  spec.validate();
  if (spec.dimension != N) throw argument_error("recovery_experiment: spec dimension != N");
  if (n < 1 || n > N) throw argument_error("recovery_experiment: need 1 <= n <= N");
  if (m < 1 || m > N) throw argument_error("recovery_experiment: need 1 <= m <= N");
  if (trials < 1) throw argument_error("recovery_experiment: trials must be positive");

  RecoverySummary summary;
  summary.n = n;
  summary.N = N;
  summary.m = m;
  summary.trials = trials;
  summary.records.resize(trials);

  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  parallel_for(trials, workers, [&](std::size_t t) {
    RandomStream trial = stream.child(t);
    RecoveryTrial& rec = summary.records[t];
    rec.n = n;
    rec.N = N;
    rec.m = m;

    const Eigen::MatrixXd gamma = sample_matrix(spec, n, trial.child(0));
    RandomStream signal = trial.child(1);
    rec.support = signal.sample_subset(N, m);
    rec.signs.resize(rec.support.size());
    rec.x = Eigen::VectorXd::Zero(N);
    for (std::size_t i = 0; i < rec.support.size(); ++i) {
      rec.signs[i] = signal.next_sign() > 0 ? 1 : -1;
      rec.x[rec.support[i]] = rec.signs[i] * inv_sqrt_m;
    }

    const Eigen::MatrixXd A = gamma * inv_sqrt_n;
    const Eigen::VectorXd b = A * rec.x;
    try {
      const BasisPursuitResult sol = basis_pursuit(A, b, 0.0);
      rec.z = sol.z;
      rec.residual = (A * (sol.z - rec.x)).norm();
      rec.success =
          (sol.z - rec.x).lpNorm<Eigen::Infinity>() <= 1e-6 * rec.x.lpNorm<Eigen::Infinity>();
    } catch (const nonconvergence_error& e) {
      rec.z = e.best_iterate;
      rec.residual = (A * (rec.z - rec.x)).norm();
      rec.success = false;
      rec.failure_reason = e.what();
    } catch (const error& e) {
      rec.z = Eigen::VectorXd::Zero(N);
      rec.residual = b.norm();
      rec.success = false;
      rec.failure_reason = e.what();
    }
  });

  for (const auto& rec : summary.records)
    if (rec.success) ++summary.successes;
  summary.rate = static_cast<double>(summary.successes) / static_cast<double>(trials);
  const ConfidenceInterval ci = clopper_pearson(summary.successes, trials);
  summary.ci_low = ci.low;
  summary.ci_high = ci.high;
  return summary;
}

DeltaEnsemble delta_m_ensemble(const DistributionSpec& spec, int n, int m, std::uint64_t trials,
                               DeltaMethod method, RandomStream stream, int workers,
                               const EnumerationLimits& limits, std::uint64_t num_supports) {
  spec.validate();
  if (n < 1) throw argument_error("delta_m_ensemble: n must be >= 1");
  if (m < 1 || m > spec.dimension) throw argument_error("delta_m_ensemble: m out of range");
  if (trials < 1) throw argument_error("delta_m_ensemble: trials must be positive");

  DeltaEnsemble ensemble;
  ensemble.method = method;
  ensemble.values.resize(trials);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // The per-trial work is already heavy; parallelize across trials and keep
  // the per-trial enumeration single-threaded.
  parallel_for(trials, workers, [&](std::size_t t) {
    RandomStream trial = stream.child(t);
    const Eigen::MatrixXd A = sample_matrix(spec, n, trial.child(0)) * inv_sqrt_n;
    if (method == DeltaMethod::exact)
      ensemble.values[t] = delta_m_exact(A, m, limits).value;
    else
      ensemble.values[t] = delta_m_sampled(A, m, num_supports, trial.child(1)).value;
  });

  ensemble.median = sample_median(ensemble.values);
  ensemble.q90 = sample_quantile(ensemble.values, 0.9);
  return ensemble;
}

double sample_median(std::vector<double> values) {
  if (values.empty()) throw argument_error("sample_median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw argument_error("sample_quantile: empty sample");
  if (q <= 0.0 || q > 1.0) throw argument_error("sample_quantile: q must be in (0,1]");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const std::size_t rank =
      std::min(n - 1, static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))) - 1);
  return values[rank];
}

}  // namespace riplab
