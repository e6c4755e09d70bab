#pragma once

#include <Eigen/Core>

#include "riplab/errors.hpp"

namespace riplab {

/// Iteration cap reached before the tolerances; carries the best iterate.
class nonconvergence_error : public error {
 public:
  nonconvergence_error(const std::string& what, Eigen::VectorXd best)
      : error(what), best_iterate(std::move(best)) {}
  Eigen::VectorXd best_iterate;
};

struct L1MinResult {
  Eigen::VectorXd z;
  double objective = 0.0;     // ||z||_1
  double residual = 0.0;      // ||Az - b||_2
  double gap = 0.0;           // relative duality gap (equality path)
  int iterations = 0;
  bool converged = false;
};

/// min ||z||_1 subject to Az = b via the split z = u - v, u,v >= 0, solved
/// with a Mehrotra predictor-corrector interior point method to relative
/// duality gap and feasibility <= gap_tol.  A must have full row rank.
L1MinResult l1min_equality(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           double gap_tol = 1e-9, int max_iter = 200);

/// min ||z||_1 subject to ||Az - b||_2 <= eps via Douglas-Rachford splitting
/// (l1 prox and exact projection onto the residual ball through the SVD of A).
/// A must have full row rank.
L1MinResult l1min_ball(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double eps,
                       double fp_tol = 1e-10, int max_iter = 100000);

}  // namespace riplab
