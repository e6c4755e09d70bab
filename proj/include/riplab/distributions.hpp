#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "riplab/random_stream.hpp"

namespace riplab {

/// Built-in isotropic log-concave laws.  Every kind is normalized (via
/// isotropic_scale) so the vector is centered with identity covariance.
enum class DistKind {
  gaussian,
  laplace_product,
  uniform_cube_product,
  uniform_ball,
  uniform_l1_ball,
  weighted_sum,
};

const char* to_string(DistKind kind);
DistKind dist_kind_from_string(const std::string& name);

/// Declarative description of a sampling law.
///
/// weighted_sum describes Y = sum_i weights[i] * X_i with the X_i independent
/// copies of *base (nesting depth at most one).  Y is isotropic exactly when
/// the weight vector has unit Euclidean norm.
struct DistributionSpec {
  DistKind kind = DistKind::gaussian;
  int dimension = 1;
  std::vector<double> weights;                    // weighted_sum only
  std::shared_ptr<const DistributionSpec> base;   // weighted_sum only

  /// Throws spec_error when malformed.
  void validate() const;

  static DistributionSpec make(DistKind kind, int dimension);
  static DistributionSpec weighted(std::vector<double> weights, DistributionSpec base);
};

/// Scale factor making the unit-parameter law have per-coordinate variance 1.
/// Rejects weighted_sum (its normalization lives in the weights).
double isotropic_scale(DistKind kind, int dimension);

/// One draw from the law.  Ball and l1-ball draws are exact (direction-radius
/// and exponential-sign representations), never MCMC.
Eigen::VectorXd sample_vector(const DistributionSpec& spec, RandomStream& stream);

/// n independent rows; row i is drawn from stream.child(i), so the result is
/// identical regardless of evaluation order or threading.
Eigen::MatrixXd sample_matrix(const DistributionSpec& spec, int n, const RandomStream& stream);

/// Empirical covariance over `trials` draws (deterministic blocked
/// accumulation; identical at any worker count).
Eigen::MatrixXd empirical_covariance(const DistributionSpec& spec, std::uint64_t trials,
                                     const RandomStream& stream, int workers = 1);

/// Largest absolute entry of (empirical covariance - identity).
double max_identity_deviation(const Eigen::MatrixXd& covariance);

}  // namespace riplab
