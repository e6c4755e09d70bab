#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "riplab/distributions.hpp"

namespace riplab {

enum class SigmaMethod { closed_form, direction_search_lower, paper_upper };
const char* to_string(SigmaMethod method);

struct SigmaEntry {
  double p = 1.0;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  SigmaMethod method = SigmaMethod::direction_search_lower;
};

/// Tabulated sigma_X(p) over an increasing p grid.  Values are kept
/// non-decreasing (isotonic correction; largest adjustment recorded).
struct SigmaProfile {
  std::optional<DistributionSpec> spec;  // absent for synthetic profiles
  std::vector<SigmaEntry> entries;
  std::uint64_t trials = 0;
  double isotonic_correction = 0.0;
};

/// Exact sup over unit directions of the p-th marginal moment, where a closed
/// form exists: gaussian only (every direction is standard normal).
std::optional<double> sigma_closed_form(const DistributionSpec& spec, double p);

enum class SigmaSearch { canonical_plus_random, sphere_ascent };

struct SigmaEstimate {
  double value = 0.0;    // lower estimate of sigma_X(p)
  double ci_low = 0.0;   // CLT interval for the winning direction's moment
  double ci_high = 0.0;
  double paper_upper = 0.0;  // the bound sigma_X(p) <= p, reported alongside
  SigmaMethod method = SigmaMethod::direction_search_lower;
  Eigen::VectorXd direction;
};

/// Lower estimate of sigma_X(p): maximizes the Monte Carlo p-th moment of
/// <t, X> over candidate directions (canonical basis, normalized all-ones,
/// 100 random ones, plus optional projected sphere ascent on a sample
/// reservoir).  The winning direction's moment is then re-estimated on fresh
/// samples, so the reported value is an unbiased estimate at that direction.
SigmaEstimate sigma_estimate(const DistributionSpec& spec, double p, std::uint64_t trials,
                             SigmaSearch search, RandomStream stream, int workers = 1);

/// Profile over a p grid: closed form where available, direction search
/// otherwise, isotonic-corrected.
SigmaProfile build_sigma_profile(const DistributionSpec& spec, const std::vector<double>& p_grid,
                                 std::uint64_t trials, SigmaSearch search, RandomStream stream,
                                 int workers = 1);

/// Profile of the bound sigma(p) = p (isotropic log-concave upper bound).
SigmaProfile paper_upper_profile(const std::vector<double>& p_grid);

/// Profile from explicit values (tests, file input).
SigmaProfile synthetic_profile(const std::vector<double>& p_grid,
                               const std::vector<double>& values);

struct SigmaInverseResult {
  double p = 1.0;
  bool saturated = false;  // u above the profile's largest value
};

/// Smallest p in the grid range with sigma(p) >= u, on the piecewise-linear
/// interpolant; clamps to the left end, saturates at the right end.
SigmaInverseResult sigma_inverse(const SigmaProfile& profile, double u);

std::vector<double> default_p_grid();  // {1, 1.5, 2, 3, 4, 6, 8, 10}

}  // namespace riplab
