#include "riplab/distributions.hpp"

#include <cmath>
#include <utility>

#include "riplab/errors.hpp"
#include "riplab/parallel.hpp"

namespace riplab {

const char* to_string(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian: return "gaussian";
    case DistKind::laplace_product: return "laplace";
    case DistKind::uniform_cube_product: return "cube";
    case DistKind::uniform_ball: return "ball";
    case DistKind::uniform_l1_ball: return "l1ball";
    case DistKind::weighted_sum: return "wsum";
  }
  throw spec_error("unknown distribution kind");
}

DistKind dist_kind_from_string(const std::string& name) {
  if (name == "gaussian") return DistKind::gaussian;
  if (name == "laplace") return DistKind::laplace_product;
  if (name == "cube") return DistKind::uniform_cube_product;
  if (name == "ball") return DistKind::uniform_ball;
  if (name == "l1ball") return DistKind::uniform_l1_ball;
  if (name == "wsum") return DistKind::weighted_sum;
  throw spec_error("unknown distribution kind '" + name + "'");
}

void DistributionSpec::validate() const {
  if (dimension < 1) throw spec_error("dimension must be >= 1");
  if (kind == DistKind::weighted_sum) {
    if (!base) throw spec_error("weighted_sum requires a base spec");
    if (base->kind == DistKind::weighted_sum)
      throw spec_error("weighted_sum must not nest another weighted_sum");
    if (weights.empty()) throw spec_error("weighted_sum requires weights");
    for (double w : weights)
      if (!std::isfinite(w)) throw spec_error("weights must be finite");
    if (base->dimension != dimension)
      throw spec_error("weighted_sum base dimension must match");
    base->validate();
  } else {
    if (!weights.empty() || base)
      throw spec_error("weights/base are only valid for weighted_sum");
  }
}

DistributionSpec DistributionSpec::make(DistKind kind, int dimension) {
  DistributionSpec spec;
  spec.kind = kind;
  spec.dimension = dimension;
  spec.validate();
  return spec;
}

DistributionSpec DistributionSpec::weighted(std::vector<double> weights, DistributionSpec base) {
  DistributionSpec spec;
  spec.kind = DistKind::weighted_sum;
  spec.dimension = base.dimension;
  spec.weights = std::move(weights);
  spec.base = std::make_shared<const DistributionSpec>(std::move(base));
  spec.validate();
  return spec;
}

double isotropic_scale(DistKind kind, int dimension) {
  if (dimension < 1) throw spec_error("dimension must be >= 1");
  const double n = static_cast<double>(dimension);
  switch (kind) {
    case DistKind::gaussian:
      return 1.0;
    case DistKind::laplace_product:
      // Unit Laplace has variance 2.
      return 1.0 / std::sqrt(2.0);
    case DistKind::uniform_cube_product:
      // Uniform on [-a,a] has variance a^2/3.
      return std::sqrt(3.0);
    case DistKind::uniform_ball:
      // E x1^2 = r^2/(N+2) on the radius-r ball.
      return std::sqrt(n + 2.0);
    case DistKind::uniform_l1_ball:
      // E x1^2 = 2/((N+1)(N+2)) on the unit l1 ball.
      return std::sqrt((n + 1.0) * (n + 2.0) / 2.0);
    case DistKind::weighted_sum:
      throw spec_error("isotropic_scale is undefined for weighted_sum");
  }
  throw spec_error("unknown distribution kind");
}

namespace {

void fill_gaussian(Eigen::VectorXd& x, RandomStream& stream) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = stream.next_gaussian();
}

Eigen::VectorXd sample_base(const DistributionSpec& spec, RandomStream& stream) {
  const int N = spec.dimension;
  Eigen::VectorXd x(N);
  switch (spec.kind) {
    case DistKind::gaussian: {
      fill_gaussian(x, stream);
      return x;
    }
    case DistKind::laplace_product: {
      const double s = isotropic_scale(spec.kind, N);
      for (int i = 0; i < N; ++i)
        x[i] = s * stream.next_sign() * stream.next_exponential();
      return x;
    }
    case DistKind::uniform_cube_product: {
      const double s = isotropic_scale(spec.kind, N);
      for (int i = 0; i < N; ++i) x[i] = s * stream.next_symmetric();
      return x;
    }
    case DistKind::uniform_ball: {
      // Gaussian direction times radius U^(1/N); exact.
      fill_gaussian(x, stream);
      double norm = x.norm();
      while (norm == 0.0) {  // measure-zero guard
        fill_gaussian(x, stream);
        norm = x.norm();
      }
      const double radius = std::pow(stream.next_unit_open(), 1.0 / N);
      x *= isotropic_scale(spec.kind, N) * radius / norm;
      return x;
    }
    case DistKind::uniform_l1_ball: {
      // (E_1,...,E_N)/(E_1+...+E_{N+1}) is uniform on the simplex; with
      // random signs this is uniform on the unit l1 ball.  Exact.
      double total = 0.0;
      for (int i = 0; i < N; ++i) {
        x[i] = stream.next_exponential();
        total += x[i];
      }
      total += stream.next_exponential();
      const double s = isotropic_scale(spec.kind, N) / total;
      for (int i = 0; i < N; ++i) x[i] *= s * stream.next_sign();
      return x;
    }
    case DistKind::weighted_sum:
      break;
  }
  throw spec_error("unknown distribution kind");
}

}  // namespace

Eigen::VectorXd sample_vector(const DistributionSpec& spec, RandomStream& stream) {
  spec.validate();
  if (spec.kind != DistKind::weighted_sum) return sample_base(spec, stream);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(spec.dimension);
  for (double w : spec.weights) {
    Eigen::VectorXd xi = sample_base(*spec.base, stream);
    y.noalias() += w * xi;
  }
  return y;
}

Eigen::MatrixXd sample_matrix(const DistributionSpec& spec, int n, const RandomStream& stream) {
  spec.validate();
  if (n < 1) throw argument_error("sample_matrix: row count must be >= 1");
  Eigen::MatrixXd rows(n, spec.dimension);
  for (int i = 0; i < n; ++i) {
    RandomStream row_stream = stream.child(static_cast<std::uint64_t>(i));
    rows.row(i) = sample_vector(spec, row_stream).transpose();
  }
  return rows;
}

Eigen::MatrixXd empirical_covariance(const DistributionSpec& spec, std::uint64_t trials,
                                     const RandomStream& stream, int workers) {
  spec.validate();
  if (trials == 0) throw argument_error("empirical_covariance: trials must be positive");
  const int N = spec.dimension;
  const std::size_t blocks = block_count(static_cast<std::size_t>(trials));
  std::vector<Eigen::MatrixXd> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    const auto range = block_range(blk, static_cast<std::size_t>(trials));
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t t = range.begin; t < range.end; ++t) {
      RandomStream s = stream.child(t);
      const Eigen::VectorXd x = sample_vector(spec, s);
      acc.selfadjointView<Eigen::Lower>().rankUpdate(x);
    }
    partial[blk] = std::move(acc);
  });
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(N, N);
  for (const auto& p : partial) sum += p;
  sum /= static_cast<double>(trials);
  return sum.selfadjointView<Eigen::Lower>();
}

double max_identity_deviation(const Eigen::MatrixXd& covariance) {
  const Eigen::MatrixXd dev =
      covariance - Eigen::MatrixXd::Identity(covariance.rows(), covariance.cols());
  return dev.cwiseAbs().maxCoeff();
}

}  // namespace riplab
