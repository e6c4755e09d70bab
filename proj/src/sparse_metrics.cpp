#include "riplab/sparse_metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "riplab/combinatorics.hpp"
#include "riplab/errors.hpp"
#include "riplab/parallel.hpp"

namespace riplab {

namespace {

struct EigRange {
  double min;
  double max;
};

// Extreme eigenvalues of a small symmetric PSD matrix.  Closed forms for
// orders 1 and 2; Eigen's solver otherwise.
EigRange sym_eig_range(const Eigen::MatrixXd& S) {
  const Eigen::Index d = S.rows();
  if (d == 1) return {S(0, 0), S(0, 0)};
  if (d == 2) {
    const double mid = 0.5 * (S(0, 0) + S(1, 1));
    const double rad = std::hypot(0.5 * (S(0, 0) - S(1, 1)), S(0, 1));
    return {mid - rad, mid + rad};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

double sym_eig_max(const Eigen::MatrixXd& S) { return sym_eig_range(S).max; }

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& G, const std::vector<int>& idx) {
  const Eigen::Index d = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd S(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      S(a, b) = G(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return S;
}

void validate_matrix(const Eigen::MatrixXd& A) {
  if (A.rows() < 1 || A.cols() < 1) throw argument_error("matrix must be nonempty");
  if (!A.allFinite()) throw argument_error("matrix entries must be finite");
}

// sqrt(sum_{i in I} <row_i, y>^2); the shared final evaluation for
// certificates from both methods.
double certificate_value(const Eigen::MatrixXd& A, const std::vector<int>& rows,
                         const Eigen::VectorXd& y) {
  double sum = 0.0;
  for (int i : rows) {
    const double s = A.row(i).dot(y);
    sum += s * s;
  }
  return std::sqrt(sum);
}

// Indices of the k largest values (ties resolved toward the lowest index),
// returned sorted ascending.
std::vector<int> top_k_indices(const Eigen::VectorXd& scores, int k) {
  std::vector<int> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Zeroes all but the m largest-magnitude coordinates (ties toward the lowest
// index) and normalizes; returns false when the result is the zero vector.
bool hard_threshold_normalize(Eigen::VectorXd& v, int m) {
  const Eigen::VectorXd mag = v.cwiseAbs();
  const std::vector<int> keep = top_k_indices(mag, m);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int j : keep) out[j] = v[j];
  const double norm = out.norm();
  if (norm == 0.0) return false;
  v = out / norm;
  return true;
}

std::vector<int> support_of(const Eigen::VectorXd& y, int m) {
  std::vector<int> J;
  for (int j = 0; j < y.size(); ++j)
    if (y[j] != 0.0) J.push_back(j);
  // Pad with unused low indices so |J| = m even for degenerate directions.
  for (int j = 0; static_cast<int>(J.size()) < m; ++j)
    if (!std::binary_search(J.begin(), J.end(), j)) J.insert(std::lower_bound(J.begin(), J.end(), j), j);
  return J;
}

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

const char* to_string(GammaMethod method) {
  return method == GammaMethod::exact ? "exact" : "heuristic";
}

double operator_norm(const Eigen::MatrixXd& A) {
  validate_matrix(A);
  // Symmetric eigensolve on the smaller Gram matrix.
  Eigen::MatrixXd G;
  if (A.rows() <= A.cols())
    G = A * A.transpose();
  else
    G = A.transpose() * A;
  const double lambda = sym_eig_max(G);
  return std::sqrt(std::max(0.0, lambda));
}

double top_m_energy(const Eigen::VectorXd& x, int m) {
  if (m < 1 || m > x.size()) throw argument_error("top_m_energy: m out of range");
  std::vector<double> sq(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) sq[static_cast<std::size_t>(i)] = x[i] * x[i];
  std::nth_element(sq.begin(), sq.begin() + (m - 1), sq.end(), std::greater<double>());
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += sq[static_cast<std::size_t>(i)];
  return std::sqrt(sum);
}

double order_statistic(const Eigen::VectorXd& x, int ell) {
  if (ell < 1 || ell > x.size()) throw argument_error("order_statistic: ell out of range");
  std::vector<double> mag(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) mag[static_cast<std::size_t>(i)] = std::abs(x[i]);
  std::nth_element(mag.begin(), mag.begin() + (ell - 1), mag.end(), std::greater<double>());
  return mag[static_cast<std::size_t>(ell - 1)];
}

double certificate_residual(const GammaCertificate& cert, const Eigen::MatrixXd& A) {
  const double reproduced = certificate_value(A, cert.rows, cert.direction);
  const double lhs = cert.value * cert.value;
  const double rhs = reproduced * reproduced;
  return std::abs(lhs - rhs) / std::max(1.0, lhs);
}

DeltaReport delta_m_exact(const Eigen::MatrixXd& A, int m, const EnumerationLimits& limits,
                          int workers) {
  validate_matrix(A);
  const int N = static_cast<int>(A.cols());
  if (m < 1 || m > N) throw argument_error("delta_m_exact: m out of range");
  const std::uint64_t count = binomial(N, m);
  if (count > limits.delta_cap)
    throw enumeration_cap_error(
        "delta_m_exact: binomial(N,m) exceeds the enumeration cap; "
        "use delta_m_sampled for a support-sampled lower bound");

  const Eigen::MatrixXd G = A.transpose() * A;

  struct Best {
    double value = -1.0;
    std::vector<int> support;
    double eigenvalue = 0.0;
    DeltaSide side = DeltaSide::upper;
  };
  const std::size_t chunk_size = 16384;
  const std::size_t chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<Best> bests(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk_size;
    const std::uint64_t end = std::min<std::uint64_t>(begin + chunk_size, count);
    std::vector<int> J = unrank_combination(begin, N, m);
    Best best;
    for (std::uint64_t r = begin; r < end; ++r) {
      const EigRange eig = sym_eig_range(submatrix(G, J));
      const double up = eig.max - 1.0;
      const double down = 1.0 - eig.min;
      const double cand = std::max(up, down);
      if (cand > best.value) {
        best.value = cand;
        best.support = J;
        best.side = up >= down ? DeltaSide::upper : DeltaSide::lower;
        best.eigenvalue = up >= down ? eig.max : eig.min;
      }
      if (r + 1 < end) next_combination(J, N);
    }
    bests[c] = std::move(best);
  });
  Best winner;
  for (const Best& b : bests)
    if (b.value > winner.value) winner = b;

  DeltaReport report;
  report.value = winner.value;
  report.support = winner.support;
  report.eigenvalue = winner.eigenvalue;
  report.side = winner.side;
  report.method = DeltaMethod::exact;
  report.supports_checked = count;
  return report;
}

DeltaReport delta_m_sampled(const Eigen::MatrixXd& A, int m, std::uint64_t num_supports,
                            RandomStream stream, int workers) {
  validate_matrix(A);
  const int N = static_cast<int>(A.cols());
  if (m < 1 || m > N) throw argument_error("delta_m_sampled: m out of range");
  if (num_supports == 0) throw argument_error("delta_m_sampled: need at least one support");

  const Eigen::MatrixXd G = A.transpose() * A;

  struct Best {
    double value = -1.0;
    std::vector<int> support;
    double eigenvalue = 0.0;
    DeltaSide side = DeltaSide::upper;
  };
  const std::size_t blocks = block_count(num_supports);
  std::vector<Best> bests(blocks);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    const auto range = block_range(blk, num_supports);
    Best best;
    for (std::size_t r = range.begin; r < range.end; ++r) {
      RandomStream s = stream.child(r);
      const std::vector<int> J = s.sample_subset(N, m);
      const EigRange eig = sym_eig_range(submatrix(G, J));
      const double up = eig.max - 1.0;
      const double down = 1.0 - eig.min;
      const double cand = std::max(up, down);
      if (cand > best.value) {
        best.value = cand;
        best.support = J;
        best.side = up >= down ? DeltaSide::upper : DeltaSide::lower;
        best.eigenvalue = up >= down ? eig.max : eig.min;
      }
    }
    bests[blk] = std::move(best);
  });
  Best winner;
  for (const Best& b : bests)
    if (b.value > winner.value) winner = b;

  DeltaReport report;
  report.value = winner.value;
  report.support = winner.support;
  report.eigenvalue = winner.eigenvalue;
  report.side = winner.side;
  report.method = DeltaMethod::support_sampled;
  report.supports_checked = num_supports;
  return report;
}

GammaCertificate gamma_km_exact(const Eigen::MatrixXd& A, int k, int m,
                                const EnumerationLimits& limits, int workers) {
  validate_matrix(A);
  const int n = static_cast<int>(A.rows());
  const int N = static_cast<int>(A.cols());
  if (k < 1 || k > n) throw argument_error("gamma_km_exact: k out of range");
  if (m < 1 || m > N) throw argument_error("gamma_km_exact: m out of range");
  const std::uint64_t row_count = binomial(n, k);
  const std::uint64_t col_count = binomial(N, m);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const bool overflow = row_count != 0 && col_count > kMax / row_count;
  if (overflow || row_count * col_count > limits.gamma_cap)
    throw enumeration_cap_error(
        "gamma_km_exact: binomial(n,k)*binomial(N,m) exceeds the enumeration cap; "
        "use gamma_km_heuristic");

  struct Best {
    double lambda = -1.0;
    std::vector<int> rows;
    std::vector<int> support;
  };
  // Chunked over supports J; for each J the n x n row Gram over J is built
  // once and every row subset I reads a k x k block of it.
  const std::uint64_t per_chunk = std::max<std::uint64_t>(1, 4096 / std::max<std::uint64_t>(1, row_count));
  const std::size_t chunks = (col_count + per_chunk - 1) / per_chunk;
  std::vector<Best> bests(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * per_chunk;
    const std::uint64_t end = std::min<std::uint64_t>(begin + per_chunk, col_count);
    std::vector<int> J = unrank_combination(begin, N, m);
    Best best;
    Eigen::MatrixXd B(n, m), R(n, n);
    for (std::uint64_t r = begin; r < end; ++r) {
      for (int j = 0; j < m; ++j) B.col(j) = A.col(J[static_cast<std::size_t>(j)]);
      R.noalias() = B * B.transpose();
      std::vector<int> I = first_combination(k);
      do {
        const double lambda = sym_eig_max(submatrix(R, I));
        if (lambda > best.lambda) {
          best.lambda = lambda;
          best.rows = I;
          best.support = J;
        }
      } while (next_combination(I, n));
      if (r + 1 < end) next_combination(J, N);
    }
    bests[c] = std::move(best);
  });
  Best winner;
  for (const Best& b : bests)
    if (b.lambda > winner.lambda) winner = b;

  // Recover the direction from the witness submatrix.
  Eigen::MatrixXd S(k, m);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < m; ++b)
      S(a, b) = A(winner.rows[static_cast<std::size_t>(a)],
                  winner.support[static_cast<std::size_t>(b)]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinV);
  Eigen::VectorXd v = svd.matrixV().col(0);
  fix_sign(v);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(N);
  for (int b = 0; b < m; ++b) y[winner.support[static_cast<std::size_t>(b)]] = v[b];

  GammaCertificate cert;
  cert.rows = winner.rows;
  cert.support = winner.support;
  cert.direction = y;
  cert.method = GammaMethod::exact;
  cert.value = std::max(std::sqrt(std::max(0.0, winner.lambda)),
                        certificate_value(A, cert.rows, y));
  return cert;
}

GammaCertificate gamma_km_heuristic(const Eigen::MatrixXd& A, int k, int m, int restarts,
                                    RandomStream stream, const Eigen::VectorXd* warm_start) {
  validate_matrix(A);
  const int n = static_cast<int>(A.rows());
  const int N = static_cast<int>(A.cols());
  if (k < 1 || k > n) throw argument_error("gamma_km_heuristic: k out of range");
  if (m < 1 || m > N) throw argument_error("gamma_km_heuristic: m out of range");
  if (restarts < 1) throw argument_error("gamma_km_heuristic: restarts must be >= 1");

  double best_obj = -1.0;
  std::vector<int> best_rows;
  Eigen::VectorXd best_y;

  const auto run_from = [&](Eigen::VectorXd y) {
    double prev_obj = -1.0;
    for (int it = 0; it < 200; ++it) {
      const Eigen::VectorXd scores = A * y;
      const std::vector<int> I = top_k_indices(scores.cwiseAbs(), k);
      double obj = 0.0;
      for (int i : I) obj += scores[i] * scores[i];
      if (obj > best_obj) {
        best_obj = obj;
        best_rows = I;
        best_y = y;
      }
      if (it > 0 && obj < prev_obj + 1e-12) break;
      prev_obj = obj;
      // One power step restricted to the selected rows, then re-sparsify.
      Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
      for (int i : I) v.noalias() += scores[i] * A.row(i).transpose();
      if (!hard_threshold_normalize(v, m)) break;
      y = v;
    }
  };

  // Deterministic start: thresholded leading right singular direction.
  {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(double(N)));
    for (int it = 0; it < 30; ++it) {
      Eigen::VectorXd w = A.transpose() * (A * v);
      const double norm = w.norm();
      if (norm == 0.0) break;
      v = w / norm;
    }
    if (!hard_threshold_normalize(v, m)) {
      v = Eigen::VectorXd::Zero(N);
      v[0] = 1.0;
    }
    run_from(v);
  }
  if (warm_start != nullptr && warm_start->size() == N) {
    Eigen::VectorXd v = *warm_start;
    if (hard_threshold_normalize(v, m)) run_from(v);
  }
  for (int r = 1; r < restarts; ++r) {
    RandomStream rs = stream.child(static_cast<std::uint64_t>(r));
    const std::vector<int> J = rs.sample_subset(N, m);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
    for (int j : J) v[j] = rs.next_gaussian();
    if (!hard_threshold_normalize(v, m)) continue;
    run_from(v);
  }

  GammaCertificate cert;
  cert.rows = best_rows;
  cert.support = support_of(best_y, m);
  cert.direction = best_y;
  cert.method = GammaMethod::heuristic;
  cert.value = certificate_value(A, cert.rows, cert.direction);
  return cert;
}

int self_consistent_k(const Eigen::MatrixXd& A, int m, double B, GammaMethod method,
                      RandomStream stream, int restarts, const EnumerationLimits& limits,
                      int workers) {
  validate_matrix(A);
  if (B < 1.0) throw argument_error("self_consistent_k: B must be >= 1");
  const int n = static_cast<int>(A.rows());
  // Gamma_{k,m} <= s_max(A), so no k above (s_max/B)^2 can qualify.
  const double smax = operator_norm(A);
  const double cap = (smax / B) * (smax / B);
  int best = 0;
  Eigen::VectorXd warm;
  for (int k = 1; k <= n; ++k) {
    if (static_cast<double>(k) > cap) break;
    GammaCertificate cert;
    if (method == GammaMethod::exact) {
      cert = gamma_km_exact(A, k, m, limits, workers);
    } else {
      cert = gamma_km_heuristic(A, k, m, restarts, stream.child(static_cast<std::uint64_t>(k)),
                                warm.size() > 0 ? &warm : nullptr);
      warm = cert.direction;
    }
    const double ratio = cert.value / B;
    if (static_cast<double>(k) <= ratio * ratio) best = k;
  }
  return best;
}

KPrimeResult k_prime(int m, int n, int N) {
  if (m < 1 || m > N) throw argument_error("k_prime: need 1 <= m <= N");
  if (n < 1) throw argument_error("k_prime: need n >= 1");
  const double lhs = m * std::log(std::exp(1.0) * N / static_cast<double>(m));
  for (int ell = 1; ell <= n; ++ell) {
    const double rhs = ell * std::log(std::exp(1.0) * n / static_cast<double>(ell));
    if (lhs <= rhs) return {ell, false};
  }
  return {n, true};
}

double lambda_threshold(int k, int m, int n, int N) {
  if (k < 1 || n < 1 || k > n) throw argument_error("lambda_threshold: need 1 <= k <= n");
  if (m < 1 || m > N) throw argument_error("lambda_threshold: need 1 <= m <= N");
  if (n > N) throw argument_error("lambda_threshold: requires N >= n");
  const double e = std::exp(1.0);
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  return std::sqrt(std::log(std::log(3.0 * md))) * std::sqrt(md) * std::log(e * N / md) +
         std::sqrt(kd) * std::log(e * n / kd);
}

}  // namespace riplab
