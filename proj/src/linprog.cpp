#include "riplab/linprog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace riplab {

namespace {

// Largest alpha in (0, 1] with x + alpha*dx >= (1-eta)*x elementwise.
double step_length(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double eta) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) alpha = std::min(alpha, -eta * x[i] / dx[i]);
  return alpha;
}

}  // namespace

L1MinResult l1min_equality(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double gap_tol,
                           int max_iter) {
  const Eigen::Index n = A.rows();
  const Eigen::Index N = A.cols();
  if (b.size() != n) throw argument_error("l1min_equality: dimension mismatch");

  // Split variables x = [u; v], c = 1, constraints A(u - v) = b.  All linear
  // algebra stays in the u/v blocks; the normal matrix is A diag(d) A^T.
  const double bnorm = b.norm();
  const double cnorm = std::sqrt(2.0 * static_cast<double>(N));

  // Mehrotra starting point.
  Eigen::LLT<Eigen::MatrixXd> aat_llt(Eigen::MatrixXd(2.0 * A * A.transpose()));
  if (aat_llt.info() != Eigen::Success)
    throw argument_error("l1min_equality: A must have full row rank");
  Eigen::VectorXd u, v;
  {
    const Eigen::VectorXd w = aat_llt.solve(b);
    const Eigen::VectorXd at_w = A.transpose() * w;
    u = at_w;
    v = -at_w;
    const double shift = std::max({0.0, -1.5 * u.minCoeff(), -1.5 * v.minCoeff()});
    u.array() += shift;
    v.array() += shift;
    const double total = u.sum() + v.sum();
    const double extra = total > 0.0 ? 0.5 * (u.squaredNorm() + v.squaredNorm()) / total : 1.0;
    u.array() += extra > 0.0 ? extra : 1.0;
    v.array() += extra > 0.0 ? extra : 1.0;
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd su = Eigen::VectorXd::Ones(N);
  Eigen::VectorXd sv = Eigen::VectorXd::Ones(N);

  L1MinResult result;
  result.z = u - v;
  double best_quality = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd at_y = A.transpose() * y;
    const Eigen::VectorXd rp = b - A * (u - v);
    const Eigen::VectorXd rdu = Eigen::VectorXd::Ones(N) - at_y - su;
    const Eigen::VectorXd rdv = Eigen::VectorXd::Ones(N) + at_y - sv;
    const double mu = (u.dot(su) + v.dot(sv)) / (2.0 * static_cast<double>(N));

    const double primal_obj = u.sum() + v.sum();
    const double dual_obj = b.dot(y);
    const double rel_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
    const double rel_pinf = rp.norm() / (1.0 + bnorm);
    const double rel_dinf = std::sqrt(rdu.squaredNorm() + rdv.squaredNorm()) / (1.0 + cnorm);

    const double quality = rel_gap + rel_pinf + rel_dinf;
    if (quality < best_quality) {
      best_quality = quality;
      result.z = u - v;
      result.gap = rel_gap;
      result.iterations = iter;
    }
    if (rel_gap <= gap_tol && rel_pinf <= gap_tol && rel_dinf <= gap_tol) {
      result.converged = true;
      break;
    }

    const Eigen::VectorXd du = u.cwiseQuotient(su);
    const Eigen::VectorXd dv = v.cwiseQuotient(sv);
    Eigen::MatrixXd M = A * (du + dv).asDiagonal() * A.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      M.diagonal().array() += 1e-12 * (1.0 + M.diagonal().maxCoeff());
      llt.compute(M);
      if (llt.info() != Eigen::Success) break;
    }

    // rc_u, rc_v are the complementarity targets; affine pass uses -u.*su.
    const auto solve_direction = [&](const Eigen::VectorXd& rcu, const Eigen::VectorXd& rcv,
                                     Eigen::VectorXd& dy, Eigen::VectorXd& dxu,
                                     Eigen::VectorXd& dxv, Eigen::VectorXd& dsu,
                                     Eigen::VectorXd& dsv) {
      const Eigen::VectorXd fu = rcu.cwiseQuotient(su) - du.cwiseProduct(rdu);
      const Eigen::VectorXd fv = rcv.cwiseQuotient(sv) - dv.cwiseProduct(rdv);
      dy = llt.solve(rp - A * (fu - fv));
      const Eigen::VectorXd at_dy = A.transpose() * dy;
      dsu = rdu - at_dy;
      dsv = rdv + at_dy;
      dxu = rcu.cwiseQuotient(su) - du.cwiseProduct(dsu);
      dxv = rcv.cwiseQuotient(sv) - dv.cwiseProduct(dsv);
    };

    Eigen::VectorXd dy, dxu, dxv, dsu, dsv;
    solve_direction(-u.cwiseProduct(su), -v.cwiseProduct(sv), dy, dxu, dxv, dsu, dsv);

    double alpha_p = std::min(step_length(u, dxu, 1.0), step_length(v, dxv, 1.0));
    double alpha_d = std::min(step_length(su, dsu, 1.0), step_length(sv, dsv, 1.0));
    const double mu_aff = ((u + alpha_p * dxu).dot(su + alpha_d * dsu) +
                           (v + alpha_p * dxv).dot(sv + alpha_d * dsv)) /
                          (2.0 * static_cast<double>(N));
    const double ratio = mu > 0.0 ? mu_aff / mu : 0.0;
    const double sigma = ratio * ratio * ratio;

    const Eigen::VectorXd rcu =
        Eigen::VectorXd::Constant(N, sigma * mu) - u.cwiseProduct(su) - dxu.cwiseProduct(dsu);
    const Eigen::VectorXd rcv =
        Eigen::VectorXd::Constant(N, sigma * mu) - v.cwiseProduct(sv) - dxv.cwiseProduct(dsv);
    solve_direction(rcu, rcv, dy, dxu, dxv, dsu, dsv);

    alpha_p = std::min({1.0, 0.9995 * step_length(u, dxu, 1.0), 0.9995 * step_length(v, dxv, 1.0)});
    alpha_d =
        std::min({1.0, 0.9995 * step_length(su, dsu, 1.0), 0.9995 * step_length(sv, dsv, 1.0)});
    u += alpha_p * dxu;
    v += alpha_p * dxv;
    y += alpha_d * dy;
    su += alpha_d * dsu;
    sv += alpha_d * dsv;
    result.iterations = iter + 1;
  }

  result.objective = result.z.lpNorm<1>();
  result.residual = (A * result.z - b).norm();
  return result;
}

L1MinResult l1min_ball(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double eps,
                       double fp_tol, int max_iter) {
  const Eigen::Index n = A.rows();
  const Eigen::Index N = A.cols();
  if (b.size() != n) throw argument_error("l1min_ball: dimension mismatch");
  if (eps < 0.0) throw argument_error("l1min_ball: eps must be nonnegative");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sig = svd.singularValues();
  if (sig.size() == 0 || sig[sig.size() - 1] <= 1e-12 * sig[0])
    throw argument_error("l1min_ball: A must have full row rank");

  const auto project_ball = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    const Eigen::VectorXd r = A * w - b;
    if (r.norm() <= eps) return w;
    const Eigen::VectorXd d = svd.matrixU().transpose() * r;
    const auto residual_at = [&](double lam) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double den = 1.0 + lam * sig[i] * sig[i];
        sum += (d[i] / den) * (d[i] / den);
      }
      return std::sqrt(sum);
    };
    double lo = 0.0, hi = 1.0;
    while (residual_at(hi) > eps) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (residual_at(mid) > eps)
        lo = mid;
      else
        hi = mid;
    }
    const double lam = hi;
    Eigen::VectorXd scaled(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i)
      scaled[i] = lam * d[i] / (1.0 + lam * sig[i] * sig[i]);
    return w - A.transpose() * (svd.matrixU() * scaled);
  };

  // Scale of the solution sets the prox step.
  const Eigen::VectorXd ls = svd.solve(b);
  const double gamma = std::max(1e-12, 0.1 * ls.cwiseAbs().maxCoeff());

  const auto shrink = [&](const Eigen::VectorXd& w) {
    Eigen::VectorXd out(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      out[i] = std::copysign(std::max(0.0, std::abs(w[i]) - gamma), w[i]);
    return out;
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd best = project_ball(w);
  L1MinResult result;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd x = shrink(w);
    const Eigen::VectorXd y = project_ball(2.0 * x - w);
    w += y - x;
    result.iterations = iter + 1;
    const double fp = (y - x).lpNorm<Eigen::Infinity>();
    if (fp <= fp_tol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      best = y;  // feasible by construction
      result.converged = true;
      break;
    }
    best = y;
  }
  result.z = best;
  result.objective = best.lpNorm<1>();
  result.residual = (A * best - b).norm();
  result.gap = 0.0;
  return result;
}

}  // namespace riplab
