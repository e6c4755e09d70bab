#include "riplab/tail_curves.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <sstream>

#include "riplab/errors.hpp"
#include "riplab/parallel.hpp"
#include "riplab/sigma.hpp"

namespace riplab {

ConfidenceInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double confidence) {
  if (trials == 0) throw argument_error("clopper_pearson: trials must be positive");
  if (hits > trials) throw argument_error("clopper_pearson: hits exceed trials");
  if (confidence <= 0.0 || confidence >= 1.0)
    throw argument_error("clopper_pearson: confidence must be in (0,1)");
  const double alpha = 1.0 - confidence;
  const double h = static_cast<double>(hits);
  const double n = static_cast<double>(trials);
  ConfidenceInterval ci;
  if (hits == 0)
    ci.low = 0.0;
  else
    ci.low = boost::math::quantile(boost::math::beta_distribution<>(h, n - h + 1.0), alpha / 2);
  if (hits == trials)
    ci.high = 1.0;
  else
    ci.high =
        boost::math::quantile(boost::math::beta_distribution<>(h + 1.0, n - h), 1.0 - alpha / 2);
  return ci;
}

TailStatistic TailStatistic::projection_sup(int m) {
  TailStatistic s;
  s.kind = Kind::projection_sup;
  s.m = m;
  return s;
}

TailStatistic TailStatistic::order_stat(int ell) {
  TailStatistic s;
  s.kind = Kind::order_stat;
  s.ell = ell;
  return s;
}

TailStatistic TailStatistic::gamma_km(int n, int k, int m, bool exact, int restarts) {
  TailStatistic s;
  s.kind = Kind::gamma_km;
  s.n = n;
  s.k = k;
  s.m = m;
  s.gamma_exact = exact;
  s.gamma_restarts = restarts;
  return s;
}

std::vector<double> default_t_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(1.0 + 0.25 * i);
  return grid;
}

namespace {

void validate_t_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw argument_error("t grid must be nonempty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1]) throw argument_error("t grid must be strictly increasing");
}

std::string describe(const TailStatistic& s, const DistributionSpec& spec) {
  std::ostringstream out;
  const int N = spec.dimension;
  switch (s.kind) {
    case TailStatistic::Kind::projection_sup:
      out << "sup_{|I|=" << s.m << "} |P_I X| over " << to_string(spec.kind) << " N=" << N
          << "; threshold t*sqrt(m)*log(eN/m)";
      break;
    case TailStatistic::Kind::order_stat:
      out << "X*(" << s.ell << ") over " << to_string(spec.kind) << " N=" << N
          << "; raw threshold t";
      break;
    case TailStatistic::Kind::gamma_km:
      out << "Gamma_{" << s.k << "," << s.m << "} of " << s.n << "x" << N << " "
          << to_string(spec.kind) << " matrices; threshold t*lambda";
      if (!s.gamma_exact)
        out << "; heuristic lower bounds (restarts=" << s.gamma_restarts << ")";
      break;
  }
  return out.str();
}

}  // namespace

TailCurve tail_curve(const DistributionSpec& spec, const TailStatistic& statistic,
                     const std::vector<double>& t_grid, std::uint64_t trials,
                     RandomStream stream, int workers, const EnumerationLimits& limits) {
  spec.validate();
  validate_t_grid(t_grid);
  if (trials < 100) throw argument_error("tail_curve: need at least 100 trials");
  const int N = spec.dimension;

  // Scale factor turning grid t into the statistic's threshold.
  double scale = 1.0;
  switch (statistic.kind) {
    case TailStatistic::Kind::projection_sup:
      if (statistic.m < 1 || statistic.m > N)
        throw argument_error("tail_curve: projection rank m out of range");
      scale = std::sqrt(static_cast<double>(statistic.m)) *
              std::log(std::exp(1.0) * N / static_cast<double>(statistic.m));
      break;
    case TailStatistic::Kind::order_stat:
      if (statistic.ell < 1 || statistic.ell > N)
        throw argument_error("tail_curve: order statistic index out of range");
      scale = 1.0;
      break;
    case TailStatistic::Kind::gamma_km:
      scale = lambda_threshold(statistic.k, statistic.m, statistic.n, N);
      break;
  }

  const std::size_t points = t_grid.size();
  std::vector<double> thresholds(points);
  for (std::size_t j = 0; j < points; ++j) thresholds[j] = t_grid[j] * scale;

  const std::size_t blocks = block_count(trials);
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    const auto range = block_range(blk, trials);
    std::vector<std::uint64_t> counts(points, 0);
    for (std::size_t t = range.begin; t < range.end; ++t) {
      RandomStream trial_stream = stream.child(t);
      double value = 0.0;
      switch (statistic.kind) {
        case TailStatistic::Kind::projection_sup: {
          const Eigen::VectorXd x = sample_vector(spec, trial_stream);
          value = top_m_energy(x, statistic.m);
          break;
        }
        case TailStatistic::Kind::order_stat: {
          const Eigen::VectorXd x = sample_vector(spec, trial_stream);
          value = order_statistic(x, statistic.ell);
          break;
        }
        case TailStatistic::Kind::gamma_km: {
          const Eigen::MatrixXd G = sample_matrix(spec, statistic.n, trial_stream.child(0));
          if (statistic.gamma_exact)
            value = gamma_km_exact(G, statistic.k, statistic.m, limits).value;
          else
            value = gamma_km_heuristic(G, statistic.k, statistic.m, statistic.gamma_restarts,
                                       trial_stream.child(1))
                        .value;
          break;
        }
      }
      for (std::size_t j = 0; j < points; ++j)
        if (value >= thresholds[j]) ++counts[j];
    }
    partial[blk] = std::move(counts);
  });

  TailCurve curve;
  curve.statistic = statistic;
  curve.descriptor = describe(statistic, spec);
  curve.t_grid = t_grid;
  curve.thresholds = thresholds;
  curve.trials = trials;
  curve.hits.assign(points, 0);
  for (const auto& counts : partial)
    for (std::size_t j = 0; j < points; ++j) curve.hits[j] += counts[j];
  curve.survival.resize(points);
  curve.ci_low.resize(points);
  curve.ci_high.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    curve.survival[j] = static_cast<double>(curve.hits[j]) / static_cast<double>(trials);
    const ConfidenceInterval ci = clopper_pearson(curve.hits[j], trials);
    curve.ci_low[j] = ci.low;
    curve.ci_high[j] = ci.high;
  }
  return curve;
}

PaourisEstimate paouris_ratio(const DistributionSpec& spec, double p, std::uint64_t trials,
                              RandomStream stream, int workers) {
  spec.validate();
  if (p < 1.0) throw argument_error("paouris_ratio: p must be >= 1");
  if (trials < 1000) throw argument_error("paouris_ratio: need at least 1e3 trials");

  const RandomStream sample_root = stream.child(0);
  const std::size_t blocks = block_count(trials);
  std::vector<double> sum_p(blocks, 0.0), sum_2(blocks, 0.0);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    const auto range = block_range(blk, trials);
    double sp = 0.0, s2 = 0.0;
    for (std::size_t i = range.begin; i < range.end; ++i) {
      RandomStream s = sample_root.child(i);
      const double norm2 = sample_vector(spec, s).squaredNorm();
      sp += std::pow(norm2, 0.5 * p);
      s2 += norm2;
    }
    sum_p[blk] = sp;
    sum_2[blk] = s2;
  });
  double sp = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    sp += sum_p[b];
    s2 += sum_2[b];
  }

  PaourisEstimate est;
  est.moment_p = std::pow(sp / static_cast<double>(trials), 1.0 / p);
  est.rms = std::sqrt(s2 / static_cast<double>(trials));
  est.sigma_hat =
      sigma_estimate(spec, p, trials, SigmaSearch::canonical_plus_random, stream.child(1), workers)
          .value;
  est.ratio = est.moment_p / (est.rms + est.sigma_hat);
  return est;
}

}  // namespace riplab
