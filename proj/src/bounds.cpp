#include "riplab/bounds.hpp"

#include <cmath>
#include <sstream>

#include "riplab/errors.hpp"
#include "riplab/sparse_metrics.hpp"

namespace riplab {

const char* to_string(BoundId id) {
  switch (id) {
    case BoundId::lemma1: return "lemma1";
    case BoundId::eq2_premise: return "eq2_premise";
    case BoundId::thm3: return "thm3";
    case BoundId::thm4: return "thm4";
    case BoundId::thm5: return "thm5";
    case BoundId::cor6: return "cor6";
    case BoundId::thm7: return "thm7";
    case BoundId::thm8_lhs: return "thm8_lhs";
    case BoundId::sigma_weighted: return "sigma_weighted";
  }
  return "unknown";
}

BoundId bound_id_from_string(const std::string& name) {
  if (name == "lemma1") return BoundId::lemma1;
  if (name == "eq2_premise") return BoundId::eq2_premise;
  if (name == "thm3") return BoundId::thm3;
  if (name == "thm4") return BoundId::thm4;
  if (name == "thm5") return BoundId::thm5;
  if (name == "cor6") return BoundId::cor6;
  if (name == "thm7") return BoundId::thm7;
  if (name == "thm8_lhs") return BoundId::thm8_lhs;
  if (name == "sigma_weighted") return BoundId::sigma_weighted;
  throw argument_error("unknown bound id '" + name + "'");
}

namespace {

constexpr double kE = 2.718281828459045235360287;

double require(const std::map<std::string, double>& params, const std::string& name,
               BoundId id) {
  const auto it = params.find(name);
  if (it == params.end())
    throw argument_error(std::string("missing parameter '") + name + "' for bound " +
                         to_string(id));
  return it->second;
}

double optional_param(const std::map<std::string, double>& params, const std::string& name,
                      double fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

int require_int(const std::map<std::string, double>& params, const std::string& name,
                BoundId id) {
  const double v = require(params, name, id);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-9)
    throw argument_error(std::string("parameter '") + name + "' must be an integer for bound " +
                         to_string(id));
  return i;
}

[[noreturn]] void violate(const std::string& premise) {
  throw domain_violation("domain violation: " + premise);
}

}  // namespace

int scan_m0(double u, int m, int N) {
  if (m < 1 || N < 1 || m > N) throw argument_error("scan_m0: need 1 <= m <= N");
  int best = 0;
  for (int k = 1; k <= m; ++k) {
    const double lhs = k * std::log(kE * N / static_cast<double>(k));
    if (lhs <= u) best = k;
  }
  return best;
}

BoundResult evaluate_bound(const BoundQuery& query) {
  const auto& P = query.params;
  BoundResult out;
  switch (query.id) {
    case BoundId::lemma1: {
      const double T_size = require(P, "T_size", query.id);
      const double theta = require(P, "theta", query.id);
      const double B = require(P, "B", query.id);
      const double n = require(P, "n", query.id);
      if (!(theta > 0.0 && theta < 1.0)) violate("lemma1 requires 0 < theta < 1");
      if (B < 1.0) violate("lemma1 requires B >= 1");
      if (T_size < 1.0) violate("lemma1 requires |T| >= 1");
      const double exponent = 3.0 * theta * theta * n / (8.0 * B * B);
      out.value = 1.0 - T_size * std::exp(-exponent);
      out.aux["exponent"] = exponent;
      break;
    }
    case BoundId::eq2_premise: {
      const int m = require_int(P, "m", query.id);
      const int N = require_int(P, "N", query.id);
      const double n = require(P, "n", query.id);
      const double theta = require(P, "theta", query.id);
      const double B = require(P, "B", query.id);
      const double C = optional_param(P, "C", kE);  // premise constant, default e
      if (!(theta > 0.0 && theta < 1.0)) violate("eq2 requires 0 < theta < 1");
      if (B < 1.0) violate("eq2 requires B >= 1");
      if (m < 1 || m > N) violate("eq2 requires 1 <= m <= N");
      const double lhs = m * std::log(C * N / static_cast<double>(m));
      const double rhs = 3.0 * theta * theta * n / (16.0 * B * B);
      out.value = rhs - lhs;  // slack
      out.aux["lhs"] = lhs;
      out.aux["rhs"] = rhs;
      out.aux["satisfied"] = lhs <= rhs ? 1.0 : 0.0;
      out.aux["C"] = C;
      break;
    }
    case BoundId::thm3: {
      const double t = require(P, "t", query.id);
      const int m = require_int(P, "m", query.id);
      const int N = require_int(P, "N", query.id);
      if (t < 1.0) violate("thm3 requires t >= 1");
      if (m < 1 || m > N) violate("thm3 requires 1 <= m <= N");
      const double md = static_cast<double>(m);
      out.value = std::exp(-t * std::sqrt(md) / std::sqrt(std::log(kE * md)) *
                           std::log(kE * N / md));
      break;
    }
    case BoundId::thm4: {
      const double t = require(P, "t", query.id);
      const int m = require_int(P, "m", query.id);
      const int N = require_int(P, "N", query.id);
      if (query.profile == nullptr) throw argument_error("thm4 requires a sigma profile");
      if (t < 1.0) violate("thm4 requires t >= 1");
      if (m < 1 || m > N) violate("thm4 requires 1 <= m <= N");
      const double md = static_cast<double>(m);
      const double u = t * std::sqrt(md) * std::log(kE * N / md);
      const SigmaInverseResult inv_u = sigma_inverse(*query.profile, u);
      const int m0 = scan_m0(inv_u.p, m, N);
      if (m0 == 0)
        violate("thm4: the m0 set {k <= m : k log(eN/k) <= sigma^{-1}(...)} is empty");
      const double denom = std::sqrt(std::log(kE * md / static_cast<double>(m0)));
      const SigmaInverseResult inv = sigma_inverse(*query.profile, u / denom);
      out.value = std::exp(-inv.p);
      out.aux["m0"] = static_cast<double>(m0);
      out.aux["sigma_inv_arg"] = u / denom;
      out.aux["sigma_inv"] = inv.p;
      out.aux["saturated"] = inv.saturated ? 1.0 : 0.0;
      break;
    }
    case BoundId::thm5: {
      const double t = require(P, "t", query.id);
      const int ell = require_int(P, "ell", query.id);
      const int N = require_int(P, "N", query.id);
      const double C = optional_param(P, "C", 1.0);
      if (query.profile == nullptr) throw argument_error("thm5 requires a sigma profile");
      if (ell < 1 || ell > N) violate("thm5 requires 1 <= ell <= N");
      const double tmin = C * std::log(kE * N / static_cast<double>(ell));
      if (t < tmin) {
        std::ostringstream msg;
        msg << "thm5 requires t >= C log(eN/ell) = " << tmin;
        violate(msg.str());
      }
      const SigmaInverseResult inv =
          sigma_inverse(*query.profile, t * std::sqrt(static_cast<double>(ell)) / C);
      out.value = std::exp(-inv.p);
      out.aux["C"] = C;
      out.aux["sigma_inv"] = inv.p;
      out.aux["saturated"] = inv.saturated ? 1.0 : 0.0;
      break;
    }
    case BoundId::cor6: {
      const double t = require(P, "t", query.id);
      const int m = require_int(P, "m", query.id);
      const int N = require_int(P, "N", query.id);
      const double b = require(P, "b", query.id);
      const double x_inf = optional_param(P, "x_inf", 0.0);
      const double x_norm = optional_param(P, "x_norm", 1.0);
      if (t < 1.0) violate("cor6 requires t >= 1");
      if (m < 1 || m > N) violate("cor6 requires 1 <= m <= N");
      if (x_norm > 1.0 + 1e-12) violate("cor6 requires |x| <= 1");
      const double md = static_cast<double>(m);
      if (b > 1.0 || b < std::max(x_inf, 1.0 / std::sqrt(md)))
        violate("cor6 requires 1 >= b >= max(||x||_inf, 1/sqrt(m))");
      const double num = t * std::sqrt(md) * std::log(kE * N / md);
      const double den = b * std::sqrt(std::log(kE * kE * b * b * md));
      out.value = std::exp(-num / den);
      out.aux["numerator"] = num;
      out.aux["denominator"] = den;
      break;
    }
    case BoundId::thm7: {
      const double t = require(P, "t", query.id);
      const int k = require_int(P, "k", query.id);
      const int m = require_int(P, "m", query.id);
      const int n = require_int(P, "n", query.id);
      const int N = require_int(P, "N", query.id);
      if (t < 1.0) violate("thm7 requires t >= 1");
      const double lambda = lambda_threshold(k, m, n, N);
      out.value = std::exp(-t * lambda / std::sqrt(std::log(3.0 * m)));
      out.aux["lambda"] = lambda;
      break;
    }
    case BoundId::thm8_lhs: {
      const int m = require_int(P, "m", query.id);
      const int N = require_int(P, "N", query.id);
      const double n = require(P, "n", query.id);
      if (m < 1 || m > N) violate("thm8 requires 1 <= m <= N");
      if (n < 1.0) violate("thm8 requires n >= 1");
      const double log_ratio = std::log(2.0 * N / n);
      out.value = m * log_ratio * log_ratio * std::log(std::log(3.0 * m));
      out.aux["ratio_to_n"] = out.value / n;
      break;
    }
    case BoundId::sigma_weighted: {
      const double p = require(P, "p", query.id);
      const double x_norm = require(P, "x_norm", query.id);
      const double x_inf = require(P, "x_inf", query.id);
      const double C = optional_param(P, "C", 1.0);
      if (p < 1.0) violate("sigma_weighted requires p >= 1");
      if (x_inf < 0.0 || x_norm < x_inf)
        violate("sigma_weighted requires 0 <= ||x||_inf <= |x|");
      out.value = C * (std::sqrt(p) * x_norm + p * x_inf);
      out.aux["C"] = C;
      break;
    }
  }
  return out;
}

namespace {

// Bound value at grid point t for threshold-rescaling constant C, together
// with the domain restriction; used by fit_constant.
struct FitFamily {
  double kappa = 0.0;             // exponential rate for t/C (thm3, cor6, thm7)
  bool uses_profile = false;      // thm5
  double sqrt_ell = 0.0;          // thm5
  double tmin_factor = 0.0;       // thm5: t >= C * tmin_factor
  const SigmaProfile* profile = nullptr;

  bool in_domain(double t, double C) const {
    if (uses_profile) return t >= C * tmin_factor;
    return t >= C;
  }
  double value(double t, double C) const {
    if (uses_profile) {
      const SigmaInverseResult inv = sigma_inverse(*profile, t * sqrt_ell / C);
      return std::exp(-inv.p);
    }
    return std::exp(-(t / C) * kappa);
  }
};

FitFamily make_family(BoundId id, const std::map<std::string, double>& params,
                      const SigmaProfile* profile) {
  FitFamily fam;
  switch (id) {
    case BoundId::thm3: {
      const int m = require_int(params, "m", id);
      const int N = require_int(params, "N", id);
      const double md = static_cast<double>(m);
      fam.kappa = std::sqrt(md) / std::sqrt(std::log(kE * md)) * std::log(kE * N / md);
      return fam;
    }
    case BoundId::cor6: {
      const int m = require_int(params, "m", id);
      const int N = require_int(params, "N", id);
      const double b = require(params, "b", id);
      const double md = static_cast<double>(m);
      fam.kappa = std::sqrt(md) * std::log(kE * N / md) /
                  (b * std::sqrt(std::log(kE * kE * b * b * md)));
      return fam;
    }
    case BoundId::thm7: {
      const int k = require_int(params, "k", id);
      const int m = require_int(params, "m", id);
      const int n = require_int(params, "n", id);
      const int N = require_int(params, "N", id);
      fam.kappa = lambda_threshold(k, m, n, N) / std::sqrt(std::log(3.0 * m));
      return fam;
    }
    case BoundId::thm5: {
      const int ell = require_int(params, "ell", id);
      const int N = require_int(params, "N", id);
      if (profile == nullptr) throw argument_error("fit_constant(thm5) requires a profile");
      fam.uses_profile = true;
      fam.profile = profile;
      fam.sqrt_ell = std::sqrt(static_cast<double>(ell));
      fam.tmin_factor = std::log(kE * N / static_cast<double>(ell));
      return fam;
    }
    default:
      throw argument_error(std::string("fit_constant: bound ") + to_string(id) +
                           " has no threshold-rescaling constant");
  }
}

}  // namespace

FitResult fit_constant(const TailCurve& curve, BoundId id,
                       const std::map<std::string, double>& params,
                       const SigmaProfile* profile) {
  const FitFamily fam = make_family(id, params, profile);
  const auto feasible = [&](double C) {
    for (std::size_t j = 0; j < curve.t_grid.size(); ++j) {
      const double t = curve.t_grid[j];
      if (!fam.in_domain(t, C)) continue;  // theorem says nothing below its domain
      if (curve.ci_high[j] > fam.value(t, C)) return false;
    }
    return true;
  };
  if (feasible(1.0)) return {1.0, false};
  constexpr double kMaxC = 1000.0;
  if (!feasible(kMaxC)) return {kMaxC, true};
  double lo = 1.0, hi = kMaxC;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {hi, false};
}

}  // namespace riplab
