#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riplab/bounds.hpp"
#include "riplab/errors.hpp"
#include "riplab/random_stream.hpp"

using namespace riplab;

namespace {

constexpr double kE = 2.718281828459045235360287;

BoundQuery query(BoundId id, std::map<std::string, double> params,
                 const SigmaProfile* profile = nullptr) {
  BoundQuery q;
  q.id = id;
  q.params = std::move(params);
  q.profile = profile;
  return q;
}

SigmaProfile identity_profile(double pmax = 20.0) {
  std::vector<double> grid, values;
  for (double p = 1.0; p <= pmax + 0.5; p += 1.0) {
    grid.push_back(p);
    values.push_back(p);
  }
  return synthetic_profile(grid, values);
}

}  // namespace

TEST_CASE("lemma1 success probability") {
  const BoundResult r =
      evaluate_bound(query(BoundId::lemma1, {{"T_size", 1}, {"theta", 0.5}, {"B", 1}, {"n", 8}}));
  CHECK(r.value == doctest::Approx(0.5276334472589853).epsilon(1e-12));
  CHECK_THROWS_AS((void)evaluate_bound(query(BoundId::lemma1,
                                             {{"T_size", 1}, {"theta", 1.5}, {"B", 1}, {"n", 8}})),
                  domain_violation);
}

TEST_CASE("eq2 premise slack and flag") {
  // lhs = m log(C N/m) with C defaulting to e; rhs = 3 theta^2 n / 16 B^2.
  const BoundResult r = evaluate_bound(query(
      BoundId::eq2_premise, {{"m", 4}, {"N", 64}, {"n", 1000}, {"theta", 0.5}, {"B", 1}}));
  const double lhs = 4.0 * std::log(kE * 64.0 / 4.0);
  const double rhs = 3.0 * 0.25 * 1000.0 / 16.0;
  CHECK(r.aux.at("lhs") == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(r.aux.at("rhs") == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(rhs - lhs).epsilon(1e-12));
  CHECK(r.aux.at("satisfied") == 1.0);
  CHECK(r.aux.at("C") == doctest::Approx(kE).epsilon(1e-12));

  const BoundResult tight = evaluate_bound(query(
      BoundId::eq2_premise,
      {{"m", 4}, {"N", 64}, {"n", 10}, {"theta", 0.5}, {"B", 1}, {"C", 1.0}}));
  CHECK(tight.aux.at("satisfied") == 0.0);
  CHECK(tight.aux.at("C") == 1.0);
}

TEST_CASE("thm3 evaluates and decreases in t") {
  double prev = 1.0;
  for (double t = 1.0; t <= 4.0; t += 0.5) {
    const BoundResult r =
        evaluate_bound(query(BoundId::thm3, {{"t", t}, {"m", 4}, {"N", 64}}));
    const double expect =
        std::exp(-t * 2.0 / std::sqrt(std::log(4.0 * kE)) * std::log(16.0 * kE));
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.value > 0.0);
    CHECK(r.value < prev);
    prev = r.value;
  }
  CHECK_THROWS_AS((void)evaluate_bound(query(BoundId::thm3, {{"t", 0.5}, {"m", 4}, {"N", 64}})),
                  domain_violation);
}

TEST_CASE("thm4 with the synthetic identity profile") {
  const SigmaProfile profile = identity_profile();
  // t chosen so the sigma-inverse argument is exactly 10.
  const double t = 10.0 / (std::sqrt(8.0) * std::log(2.0 * kE));
  const BoundResult r =
      evaluate_bound(query(BoundId::thm4, {{"t", t}, {"m", 8}, {"N", 16}}, &profile));
  CHECK(r.aux.at("m0") == 4.0);  // exhaustive-scan oracle below
  CHECK(r.aux.at("sigma_inv_arg") == doctest::Approx(7.685155230375254).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(4.5959944003032835e-4).epsilon(1e-9));

  // Exhaustive scan oracle for m0 at u = 10.
  int expect_m0 = 0;
  for (int k = 1; k <= 8; ++k)
    if (k * std::log(kE * 16.0 / k) <= 10.0) expect_m0 = k;
  CHECK(expect_m0 == 4);
  CHECK(scan_m0(10.0, 8, 16) == expect_m0);
}

TEST_CASE("thm4 rejects an empty m0 set") {
  const SigmaProfile tiny = synthetic_profile({1.0, 2.0}, {0.1, 0.2});
  CHECK_THROWS_AS(
      (void)evaluate_bound(query(BoundId::thm4, {{"t", 1}, {"m", 1}, {"N", 100}}, &tiny)),
      domain_violation);
}

TEST_CASE("m0 scan equals brute force on random inputs") {
  RandomStream s(17);
  for (int rep = 0; rep < 100; ++rep) {
    const int N = 2 + static_cast<int>(s.next_below(60));
    const int m = 1 + static_cast<int>(s.next_below(static_cast<std::uint64_t>(N)));
    const double u = 20.0 * s.next_unit();
    int expect = 0;
    for (int k = 1; k <= m; ++k)
      if (k * std::log(kE * N / k) <= u) expect = k;
    CHECK(scan_m0(u, m, N) == expect);
  }
}

TEST_CASE("thm5 domain check and value") {
  const SigmaProfile profile = identity_profile();
  const double tmin = std::log(kE * 100.0 / 4.0);
  CHECK_THROWS_WITH_AS(
      (void)evaluate_bound(
          query(BoundId::thm5, {{"t", 0.9 * tmin}, {"ell", 4}, {"N", 100}}, &profile)),
      doctest::Contains("t >= C log(eN/ell)"), domain_violation);

  const double t = 1.2 * tmin;
  const BoundResult r =
      evaluate_bound(query(BoundId::thm5, {{"t", t}, {"ell", 4}, {"N", 100}}, &profile));
  CHECK(r.value == doctest::Approx(std::exp(-t * 2.0)).epsilon(1e-9));

  // The premise constant C is shared with the bound.
  const BoundResult rc = evaluate_bound(
      query(BoundId::thm5, {{"t", 2.0 * tmin}, {"ell", 4}, {"N", 100}, {"C", 2.0}}, &profile));
  CHECK(rc.value == doctest::Approx(std::exp(-2.0 * tmin * 2.0 / 2.0)).epsilon(1e-9));
}

TEST_CASE("cor6 worked example and domain") {
  const BoundResult r =
      evaluate_bound(query(BoundId::cor6, {{"t", 1}, {"m", 4}, {"N", 16}, {"b", 1}}));
  CHECK(r.value == doctest::Approx(0.07475551611503187).epsilon(1e-9));

  CHECK_THROWS_AS(
      (void)evaluate_bound(query(BoundId::cor6, {{"t", 1}, {"m", 4}, {"N", 16}, {"b", 1.2}})),
      domain_violation);
  CHECK_THROWS_AS(
      (void)evaluate_bound(query(BoundId::cor6, {{"t", 1}, {"m", 4}, {"N", 16}, {"b", 0.4}})),
      domain_violation);
  CHECK_THROWS_AS((void)evaluate_bound(query(
                      BoundId::cor6,
                      {{"t", 1}, {"m", 4}, {"N", 16}, {"b", 1.0}, {"x_norm", 1.5}})),
                  domain_violation);
}

TEST_CASE("thm7 value carries lambda") {
  const BoundResult r = evaluate_bound(
      query(BoundId::thm7, {{"t", 2}, {"k", 2}, {"m", 4}, {"n", 8}, {"N", 16}}));
  const double lambda = lambda_threshold(2, 4, 8, 16);
  CHECK(r.aux.at("lambda") == doctest::Approx(lambda).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(std::exp(-2.0 * lambda / std::sqrt(std::log(12.0))))
                       .epsilon(1e-12));
}

TEST_CASE("thm8 left-hand side") {
  const BoundResult r =
      evaluate_bound(query(BoundId::thm8_lhs, {{"m", 10}, {"N", 1024}, {"n", 512}}));
  CHECK(r.value == doctest::Approx(23.525430654013263).epsilon(1e-9));
  CHECK(r.aux.at("ratio_to_n") == doctest::Approx(0.045948106746).epsilon(1e-9));
}

TEST_CASE("sigma_weighted moment bound") {
  const BoundResult r = evaluate_bound(
      query(BoundId::sigma_weighted, {{"p", 4}, {"x_norm", 0.8}, {"x_inf", 0.3}}));
  CHECK(r.value == doctest::Approx(2.0 * 0.8 + 4.0 * 0.3).epsilon(1e-12));
  const BoundResult rc = evaluate_bound(query(
      BoundId::sigma_weighted, {{"p", 4}, {"x_norm", 0.8}, {"x_inf", 0.3}, {"C", 2.5}}));
  CHECK(rc.value == doctest::Approx(2.5 * (1.6 + 1.2)).epsilon(1e-12));
}

TEST_CASE("missing parameters are named") {
  CHECK_THROWS_WITH_AS((void)evaluate_bound(query(BoundId::thm3, {{"t", 1}, {"m", 4}})),
                       doctest::Contains("'N'"), argument_error);
  CHECK_THROWS_AS((void)evaluate_bound(query(BoundId::thm4, {{"t", 1}, {"m", 4}, {"N", 16}})),
                  argument_error);  // profile missing
}

TEST_CASE("bound id names round trip") {
  for (BoundId id : {BoundId::lemma1, BoundId::eq2_premise, BoundId::thm3, BoundId::thm4,
                     BoundId::thm5, BoundId::cor6, BoundId::thm7, BoundId::thm8_lhs,
                     BoundId::sigma_weighted})
    CHECK(bound_id_from_string(to_string(id)) == id);
  CHECK_THROWS_AS((void)bound_id_from_string("thm9"), argument_error);
}

namespace {

TailCurve synthetic_curve(const std::vector<double>& t_grid, const std::vector<double>& survival) {
  TailCurve curve;
  curve.t_grid = t_grid;
  curve.thresholds = t_grid;
  curve.survival = survival;
  curve.ci_low = survival;
  curve.ci_high = survival;
  curve.trials = 1000000;
  curve.hits.assign(t_grid.size(), 0);
  return curve;
}

}  // namespace

TEST_CASE("fit_constant self-consistency at C=1") {
  const int m = 4, N = 64;
  const double kappa = std::sqrt(4.0) / std::sqrt(std::log(4.0 * kE)) * std::log(16.0 * kE);
  std::vector<double> grid, surv;
  for (double t = 1.0; t <= 4.01; t += 0.5) {
    grid.push_back(t);
    surv.push_back(std::exp(-t * kappa));
  }
  const FitResult fit = fit_constant(synthetic_curve(grid, surv), BoundId::thm3,
                                     {{"m", double(m)}, {"N", double(N)}});
  CHECK_FALSE(fit.unbounded);
  CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fit_constant on an identically-zero curve") {
  const FitResult fit = fit_constant(synthetic_curve({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}),
                                     BoundId::thm3, {{"m", 4}, {"N", 64}});
  CHECK(fit.c == 1.0);
  CHECK_FALSE(fit.unbounded);
}

TEST_CASE("fit_constant recovers a planted threshold rescaling") {
  // Curve built from the thm3 bound at C = 2.
  const double kappa = std::sqrt(4.0) / std::sqrt(std::log(4.0 * kE)) * std::log(16.0 * kE);
  std::vector<double> grid, surv;
  for (double t = 1.0; t <= 8.01; t += 0.5) {
    grid.push_back(t);
    surv.push_back(std::exp(-(t / 2.0) * kappa));
  }
  const FitResult fit =
      fit_constant(synthetic_curve(grid, surv), BoundId::thm3, {{"m", 4}, {"N", 64}});
  CHECK_FALSE(fit.unbounded);
  CHECK(fit.c == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("fit_constant reports failure past the cap") {
  const FitResult fit = fit_constant(synthetic_curve({2000.0, 3000.0}, {1.0, 1.0}),
                                     BoundId::thm3, {{"m", 4}, {"N", 64}});
  CHECK(fit.unbounded);
}

TEST_CASE("fit_constant thm5 uses the profile") {
  const SigmaProfile profile = identity_profile();
  // Survival equal to exp(-t sqrt(ell)) matches C = 1 exactly.
  const int ell = 4, N = 16;
  const double tmin = std::log(kE * N / double(ell));
  std::vector<double> grid, surv;
  for (double t = tmin; t <= 5 * tmin; t += 0.5 * tmin) {
    grid.push_back(t);
    surv.push_back(std::exp(-t * 2.0));
  }
  const FitResult fit = fit_constant(synthetic_curve(grid, surv), BoundId::thm5,
                                     {{"ell", double(ell)}, {"N", double(N)}}, &profile);
  CHECK_FALSE(fit.unbounded);
  CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS((void)fit_constant(synthetic_curve(grid, surv), BoundId::lemma1, {}, nullptr),
                  argument_error);
}
