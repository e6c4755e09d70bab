#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riplab/distributions.hpp"
#include "riplab/sparse_metrics.hpp"

namespace riplab {

struct ConfidenceInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact binomial (Clopper-Pearson) two-sided interval for hits/trials.
ConfidenceInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials,
                                   double confidence = 0.95);

/// Which tail statistic a curve measures, with its size parameters.
struct TailStatistic {
  enum class Kind { projection_sup, order_stat, gamma_km };
  Kind kind = Kind::projection_sup;
  int m = 0;     // projection_sup, gamma_km
  int ell = 0;   // order_stat
  int n = 0;     // gamma_km: matrix rows
  int k = 0;     // gamma_km: row-subset size
  bool gamma_exact = false;
  int gamma_restarts = 10;

  static TailStatistic projection_sup(int m);
  static TailStatistic order_stat(int ell);
  static TailStatistic gamma_km(int n, int k, int m, bool exact = false, int restarts = 10);
};

/// Empirical survival curve with exact binomial confidence intervals.
/// Thresholds carry the theorem scaling for the statistic:
///   projection_sup: t * sqrt(m) * log(eN/m)
///   order_stat:     t
///   gamma_km:       t * lambda_threshold(k, m, n, N)
struct TailCurve {
  TailStatistic statistic;
  std::string descriptor;
  std::vector<double> t_grid;
  std::vector<double> thresholds;
  std::vector<std::uint64_t> hits;
  std::vector<double> survival;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::uint64_t trials = 0;
};

std::vector<double> default_t_grid();  // 1, 1.25, ..., 4

TailCurve tail_curve(const DistributionSpec& spec, const TailStatistic& statistic,
                     const std::vector<double>& t_grid, std::uint64_t trials,
                     RandomStream stream, int workers = 1,
                     const EnumerationLimits& limits = {});

struct PaourisEstimate {
  double ratio = 0.0;      // empirical lower bound on the best constant
  double moment_p = 0.0;   // (E|X|^p)^{1/p}
  double rms = 0.0;        // (E|X|^2)^{1/2}
  double sigma_hat = 0.0;  // direction-search lower sigma estimate
};

/// Monte Carlo estimate of (E|X|^p)^{1/p} / ((E|X|^2)^{1/2} + sigma_hat(p)).
PaourisEstimate paouris_ratio(const DistributionSpec& spec, double p, std::uint64_t trials,
                              RandomStream stream, int workers = 1);

}  // namespace riplab
