#pragma once

#include <map>
#include <string>

#include "riplab/sigma.hpp"
#include "riplab/tail_curves.hpp"

namespace riplab {

/// Closed-form bounds and premise checks.  Unspecified absolute constants
/// enter as explicit parameters (default 1; the premise constant of
/// eq2_premise defaults to e) and are echoed back in the result.
enum class BoundId {
  lemma1,        // success probability 1 - |T| exp(-3 theta^2 n / 8 B^2)
  eq2_premise,   // m log(C N/m) <= 3 theta^2 n / 16 B^2 (slack + flag)
  thm3,          // exp(-t sqrt(m)/sqrt(log(em)) log(eN/m))
  thm4,          // exp(-sigma^{-1}(t sqrt(m) log(eN/m)/sqrt(log(e m/m0)))), with m0
  thm5,          // exp(-sigma^{-1}(t sqrt(ell)/C)), domain t >= C log(eN/ell)
  cor6,          // exp(-t sqrt(m) log(eN/m) / (b sqrt(log(e^2 b^2 m))))
  thm7,          // exp(-t lambda / sqrt(log(3m)))
  thm8_lhs,      // m log^2(2N/n) loglog(3m), plus ratio to n
  sigma_weighted // C (sqrt(p)|x| + p ||x||_inf)
};

const char* to_string(BoundId id);
BoundId bound_id_from_string(const std::string& name);

struct BoundQuery {
  BoundId id = BoundId::lemma1;
  std::map<std::string, double> params;   // t, m, N, n, k, ell, theta, B, b,
                                          // T_size, C, p, x_norm, x_inf
  const SigmaProfile* profile = nullptr;  // required for thm4 and thm5
};

struct BoundResult {
  double value = 0.0;
  std::map<std::string, double> aux;  // constants used + intermediates
};

/// Evaluates the cited formula exactly; rejects out-of-domain inputs with a
/// domain_violation naming the violated premise.
BoundResult evaluate_bound(const BoundQuery& query);

/// Largest k in [1, m] with k log(eN/k) <= u; 0 when no k qualifies.
int scan_m0(double u, int m, int N);

struct FitResult {
  double c = 1.0;
  bool unbounded = false;  // no C <= 1000 dominates the curve
};

/// Smallest C >= 1 whose bound dominates ci_high at every in-domain grid
/// point.  Supported: thm3, thm5 (needs profile), cor6, thm7 - the bounds
/// where C rescales the threshold.
FitResult fit_constant(const TailCurve& curve, BoundId id,
                       const std::map<std::string, double>& params,
                       const SigmaProfile* profile = nullptr);

}  // namespace riplab
