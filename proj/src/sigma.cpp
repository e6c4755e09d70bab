#include "riplab/sigma.hpp"

#include <algorithm>
#include <cmath>

#include "riplab/errors.hpp"
#include "riplab/parallel.hpp"

namespace riplab {

const char* to_string(SigmaMethod method) {
  switch (method) {
    case SigmaMethod::closed_form: return "closed_form";
    case SigmaMethod::direction_search_lower: return "direction_search_lower";
    case SigmaMethod::paper_upper: return "paper_upper";
  }
  return "unknown";
}

std::optional<double> sigma_closed_form(const DistributionSpec& spec, double p) {
  if (p < 1.0) throw argument_error("sigma_closed_form: p must be >= 1");
  spec.validate();
  if (spec.kind != DistKind::gaussian) return std::nullopt;
  // All marginals are standard normal: E|g|^p = 2^{p/2} Gamma((p+1)/2)/sqrt(pi).
  const double log_moment =
      0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(M_PI);
  return std::exp(log_moment / p);
}

namespace {

constexpr int kRandomDirections = 100;
constexpr std::size_t kSlab = 256;

Eigen::MatrixXd candidate_directions(int N, RandomStream stream) {
  const int d = N + 1 + kRandomDirections;
  Eigen::MatrixXd D(d, N);
  D.topRows(N) = Eigen::MatrixXd::Identity(N, N);
  D.row(N).setConstant(1.0 / std::sqrt(static_cast<double>(N)));
  for (int r = 0; r < kRandomDirections; ++r) {
    Eigen::VectorXd v(N);
    double norm = 0.0;
    do {
      for (int j = 0; j < N; ++j) v[j] = stream.next_gaussian();
      norm = v.norm();
    } while (norm == 0.0);
    D.row(N + 1 + r) = v.transpose() / norm;
  }
  return D;
}

// Accumulates sum of |<t, X>|^p for every row t of D over one contiguous
// sample range, in sample order.
void accumulate_direction_moments(const DistributionSpec& spec, const Eigen::MatrixXd& D,
                                  double p, const RandomStream& sample_root, std::size_t begin,
                                  std::size_t end, Eigen::VectorXd& sums,
                                  Eigen::MatrixXd* reservoir) {
  const int N = spec.dimension;
  Eigen::MatrixXd X(kSlab, N);
  Eigen::MatrixXd G;
  for (std::size_t at = begin; at < end; at += kSlab) {
    const std::size_t stop = std::min(at + kSlab, end);
    const int rows = static_cast<int>(stop - at);
    for (int r = 0; r < rows; ++r) {
      const std::size_t index = at + static_cast<std::size_t>(r);
      RandomStream s = sample_root.child(index);
      X.row(r) = sample_vector(spec, s).transpose();
      if (reservoir != nullptr && index < static_cast<std::size_t>(reservoir->rows()))
        reservoir->row(static_cast<Eigen::Index>(index)) = X.row(r);
    }
    G.noalias() = X.topRows(rows) * D.transpose();
    for (int r = 0; r < rows; ++r)
      for (Eigen::Index dir = 0; dir < D.rows(); ++dir)
        sums[dir] += std::pow(std::abs(G(r, dir)), p);
  }
}

struct MomentStats {
  double mean = 0.0;
  double se = 0.0;
};

// Mean and CLT standard error of |<t, X>|^p at a fixed direction.
MomentStats direction_moment(const DistributionSpec& spec, const Eigen::VectorXd& t, double p,
                             std::uint64_t trials, const RandomStream& sample_root,
                             int workers) {
  const std::size_t blocks = block_count(trials);
  std::vector<double> sum1(blocks, 0.0), sum2(blocks, 0.0);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    const auto range = block_range(blk, trials);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = range.begin; i < range.end; ++i) {
      RandomStream s = sample_root.child(i);
      const Eigen::VectorXd x = sample_vector(spec, s);
      const double g = std::pow(std::abs(t.dot(x)), p);
      s1 += g;
      s2 += g * g;
    }
    sum1[blk] = s1;
    sum2[blk] = s2;
  });
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    s1 += sum1[b];
    s2 += sum2[b];
  }
  const double n = static_cast<double>(trials);
  MomentStats stats;
  stats.mean = s1 / n;
  const double var = std::max(0.0, s2 / n - stats.mean * stats.mean);
  stats.se = std::sqrt(var / n);
  return stats;
}

double reservoir_objective(const Eigen::MatrixXd& R, const Eigen::VectorXd& t, double p) {
  const Eigen::VectorXd g = R * t;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) sum += std::pow(std::abs(g[i]), p);
  return sum / static_cast<double>(R.rows());
}

// Projected gradient ascent of the reservoir moment over the unit sphere.
Eigen::VectorXd sphere_ascent(const Eigen::MatrixXd& R, Eigen::VectorXd t, double p) {
  double best = reservoir_objective(R, t, p);
  Eigen::VectorXd best_t = t;
  double step = 0.5;
  const double n = static_cast<double>(R.rows());
  for (int it = 0; it < 80 && step > 1e-6; ++it) {
    const Eigen::VectorXd g = R * t;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(t.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double gi = g[i];
      if (gi == 0.0) continue;
      grad.noalias() += (p * std::pow(std::abs(gi), p - 1.0) * (gi > 0 ? 1.0 : -1.0) / n) *
                        R.row(i).transpose();
    }
    const double gnorm = grad.norm();
    if (gnorm == 0.0) break;
    Eigen::VectorXd cand = t + (step / gnorm) * grad;
    cand.normalize();
    const double obj = reservoir_objective(R, cand, p);
    if (obj > best) {
      best = obj;
      best_t = cand;
      t = cand;
    } else {
      step *= 0.5;
    }
  }
  return best_t;
}

void validate_p_grid(const std::vector<double>& p_grid) {
  if (p_grid.empty()) throw argument_error("p grid must be nonempty");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (p_grid[i] < 1.0) throw argument_error("p grid values must be >= 1");
    if (i > 0 && p_grid[i] <= p_grid[i - 1])
      throw argument_error("p grid must be strictly increasing");
  }
}

// Pool-adjacent-violators toward a nondecreasing fit; returns the largest
// absolute adjustment.
double isotonic_nondecreasing(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> count(n);
  std::size_t top = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[top] = v[i];
    weight[top] = 1.0;
    count[top] = 1;
    ++top;
    while (top > 1 && level[top - 2] > level[top - 1]) {
      const double w = weight[top - 2] + weight[top - 1];
      level[top - 2] = (weight[top - 2] * level[top - 2] + weight[top - 1] * level[top - 1]) / w;
      weight[top - 2] = w;
      count[top - 2] += count[top - 1];
      --top;
    }
  }
  double max_adjust = 0.0;
  std::size_t at = 0;
  for (std::size_t b = 0; b < top; ++b)
    for (std::size_t r = 0; r < count[b]; ++r, ++at) {
      max_adjust = std::max(max_adjust, std::abs(v[at] - level[b]));
      v[at] = level[b];
    }
  return max_adjust;
}

}  // namespace

SigmaEstimate sigma_estimate(const DistributionSpec& spec, double p, std::uint64_t trials,
                             SigmaSearch search, RandomStream stream, int workers) {
  spec.validate();
  if (p < 1.0) throw argument_error("sigma_estimate: p must be >= 1");
  if (trials < 1000) throw argument_error("sigma_estimate: need at least 1e3 trials");
  const int N = spec.dimension;

  const Eigen::MatrixXd D = candidate_directions(N, stream.child(0));

  // Selection pass: per-direction mean of |<t,X>|^p over shared samples.
  const RandomStream select_root = stream.child(1);
  const std::size_t blocks = block_count(trials);
  std::vector<Eigen::VectorXd> partial(blocks);
  const std::size_t reservoir_rows =
      search == SigmaSearch::sphere_ascent
          ? std::min<std::size_t>(trials,
                                  std::max<std::size_t>(1000, 4000000 / std::max(N, 1)))
          : 0;
  Eigen::MatrixXd reservoir(static_cast<Eigen::Index>(reservoir_rows), N);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    const auto range = block_range(blk, trials);
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(D.rows());
    accumulate_direction_moments(spec, D, p, select_root, range.begin, range.end, sums,
                                 reservoir_rows > 0 ? &reservoir : nullptr);
    partial[blk] = std::move(sums);
  });
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(D.rows());
  for (const auto& s : partial) sums += s;

  Eigen::Index best_dir = 0;
  sums.maxCoeff(&best_dir);
  Eigen::VectorXd t = D.row(best_dir).transpose();

  if (search == SigmaSearch::sphere_ascent && reservoir_rows > 0)
    t = sphere_ascent(reservoir, t, p);

  // Evaluation pass on fresh samples: unbiased at the chosen direction.
  const MomentStats stats = direction_moment(spec, t, p, trials, stream.child(2), workers);

  SigmaEstimate out;
  const double inv_p = 1.0 / p;
  out.value = std::pow(stats.mean, inv_p);
  out.ci_low = std::pow(std::max(0.0, stats.mean - 1.96 * stats.se), inv_p);
  out.ci_high = std::pow(stats.mean + 1.96 * stats.se, inv_p);
  out.paper_upper = p;
  out.method = SigmaMethod::direction_search_lower;
  out.direction = t;
  return out;
}

SigmaProfile build_sigma_profile(const DistributionSpec& spec, const std::vector<double>& p_grid,
                                 std::uint64_t trials, SigmaSearch search, RandomStream stream,
                                 int workers) {
  validate_p_grid(p_grid);
  SigmaProfile profile;
  profile.spec = spec;
  profile.trials = trials;
  std::vector<double> values;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const double p = p_grid[i];
    SigmaEntry entry;
    entry.p = p;
    if (const auto closed = sigma_closed_form(spec, p)) {
      entry.value = *closed;
      entry.ci_low = entry.ci_high = *closed;
      entry.method = SigmaMethod::closed_form;
    } else {
      const SigmaEstimate est = sigma_estimate(spec, p, trials, search, stream.child(i), workers);
      entry.value = est.value;
      entry.ci_low = est.ci_low;
      entry.ci_high = est.ci_high;
      entry.method = est.method;
    }
    profile.entries.push_back(entry);
    values.push_back(entry.value);
  }
  profile.isotonic_correction = isotonic_nondecreasing(values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    profile.entries[i].value = values[i];
    profile.entries[i].ci_low = std::min(profile.entries[i].ci_low, values[i]);
    profile.entries[i].ci_high = std::max(profile.entries[i].ci_high, values[i]);
  }
  return profile;
}

SigmaProfile paper_upper_profile(const std::vector<double>& p_grid) {
  validate_p_grid(p_grid);
  SigmaProfile profile;
  for (double p : p_grid) {
    SigmaEntry entry;
    entry.p = p;
    entry.value = entry.ci_low = entry.ci_high = p;
    entry.method = SigmaMethod::paper_upper;
    profile.entries.push_back(entry);
  }
  return profile;
}

SigmaProfile synthetic_profile(const std::vector<double>& p_grid,
                               const std::vector<double>& values) {
  validate_p_grid(p_grid);
  if (values.size() != p_grid.size())
    throw argument_error("synthetic_profile: grid/value length mismatch");
  SigmaProfile profile;
  std::vector<double> v = values;
  profile.isotonic_correction = isotonic_nondecreasing(v);
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    SigmaEntry entry;
    entry.p = p_grid[i];
    entry.value = entry.ci_low = entry.ci_high = v[i];
    entry.method = SigmaMethod::direction_search_lower;
    profile.entries.push_back(entry);
  }
  return profile;
}

SigmaInverseResult sigma_inverse(const SigmaProfile& profile, double u) {
  if (profile.entries.empty()) throw argument_error("sigma_inverse: empty profile");
  const auto& e = profile.entries;
  if (u <= e.front().value) return {e.front().p, false};
  if (u > e.back().value) return {e.back().p, true};
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i].value >= u) {
      const double dv = e[i].value - e[i - 1].value;  // > 0: e[i-1] < u <= e[i]
      const double frac = (u - e[i - 1].value) / dv;
      return {e[i - 1].p + frac * (e[i].p - e[i - 1].p), false};
    }
  }
  return {e.back().p, true};
}

std::vector<double> default_p_grid() { return {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0}; }

}  // namespace riplab
