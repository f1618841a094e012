#include <cmath>

#include "doctest.h"
#include "nfsic/power.hpp"
#include "support/oracles.hpp"

using namespace nfsic;

namespace {

// Term-by-term scalar evaluation of the bound, written independently of
// the library implementation.
double bound_by_hand(double lam, double r, double n, int J, double g,
                     double ct) {
  const double b = 1.0, b_star = 2.0;  // Gaussian kernel class
  const double j = J;
  const double c1 = 4.0 * b * b * j * std::sqrt(j) * ct;
  const double c2 = 4.0 * b * std::sqrt(j) * ct;
  const double c3 = 4.0 * b * b * j * ct * ct;
  const double gap = lam - r;
  const double t1 =
      62.0 * std::exp(-(g * g * gap * gap) / (9.0 * c1 * c1 * j * j * n * b_star));
  const double t2 = 2.0 * std::exp(-std::floor(0.5 * n) * gap * gap /
                                   (72.0 * c2 * c2 * j * b * b * n * n));
  const double num =
      gap * g * (n - 1.0) / 3.0 - 8.0 * c1 * b * b * n * j - c3 * g * g * n * (n - 1.0);
  const double t3 =
      2.0 * std::exp(-num * num / (256.0 * b * b * b * b * j * j * c1 * c1 * n * n * (n - 1.0)));
  return 1.0 - t1 - t2 - t3;
}

}  // namespace

TEST_SUITE("power") {

TEST_CASE("bound at lambda = r is vacuous but formula-exact") {
  PowerBoundInputs in;
  in.lambda_n = 18.3;
  in.r = 18.3;
  in.n = 1000.0;
  in.J = 5;
  in.gamma_n = 0.01;
  const double got = power_lower_bound(in);
  CHECK(got <= -63.0);
  CHECK(got == doctest::Approx(bound_by_hand(18.3, 18.3, 1000.0, 5, 0.01, 1.0))
                   .epsilon(1e-12));
}

TEST_CASE("bound matches the hand evaluation at a generic point") {
  PowerBoundInputs in;
  in.lambda_n = 3.0e6;
  in.r = 11.07;
  in.n = 500000.0;
  in.J = 3;
  in.gamma_n = 0.05;
  in.c_tilde = 1.7;
  CHECK(power_lower_bound(in) ==
        doctest::Approx(bound_by_hand(3.0e6, 11.07, 500000.0, 3, 0.05, 1.7))
            .epsilon(1e-12));
}

TEST_CASE("golden regression points") {
  // Frozen from an independent evaluation of the printed formula.
  struct Point {
    double lambda, r, n;
    int J;
    double gamma, ct, want;
  };
  const Point pts[] = {
      {5000000.0, 18.3, 1000000, 5, 0.01, 1.0, -62.8279920994018},
      {10000000.0, 31.41, 500000, 10, 0.05, 1.0, -61.9327967136444},
      {2000000.0, 3.84, 2000000, 1, 0.1, 1.0, -0.956859893155576},
      {8000000.0, 11.07, 750000, 5, 0.02, 2.0, -62.4148932768659},
      {12000000.0, 18.3, 1000000, 10, 0.01, 0.5, -62.8761017960759},
  };
  for (const auto& p : pts) {
    PowerBoundInputs in;
    in.lambda_n = p.lambda;
    in.r = p.r;
    in.n = p.n;
    in.J = p.J;
    in.gamma_n = p.gamma;
    in.c_tilde = p.ct;
    CHECK(power_lower_bound(in) ==
          doctest::Approx(p.want).epsilon(1e-12));
  }
}

TEST_CASE("bound is non-decreasing in lambda at large n") {
  PowerBoundInputs in;
  in.r = 11.07;
  in.n = 1000000.0;
  in.J = 5;
  in.gamma_n = 0.01;
  in.c_tilde = 1.0;
  double prev = -1e9;
  for (double gap = 0.0; gap <= 1e6; gap += 5e4) {
    in.lambda_n = in.r + gap;
    const double v = power_lower_bound(in);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("bound domain error below r") {
  PowerBoundInputs in;
  in.lambda_n = 1.0;
  in.r = 2.0;
  in.n = 100.0;
  in.J = 2;
  in.gamma_n = 0.01;
  CHECK_THROWS_AS(power_lower_bound(in), InputError);
}

TEST_CASE("estimate_c_tilde on an identity covariance") {
  NfsicState state;
  state.sigma_hat = Matrix::Identity(4, 4);
  state.gamma = 0.0;
  state.u_hat = Vector::Zero(4);
  state.lambda_hat = 0.0;
  CHECK(estimate_c_tilde(state) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("single-trial rates are 0 or 1 and tables reproduce") {
  SimulationPlan plan;
  plan.problem.kind = ProblemKind::sg;
  plan.problem.dx = 1;
  plan.problem.dy = 1;
  plan.method = Method::nfsic_med;
  plan.grid = {200.0};
  plan.trials = 1;
  plan.J = 2;
  plan.master_seed = 3;
  const auto result = simulate_rejection_rate(plan);
  REQUIRE(result.rows.size() == 1);
  const double rate = result.rows[0].rate;
  CHECK((rate == 0.0 || rate == 1.0));

  const auto again = simulate_rejection_rate(plan);
  CHECK(again.rows[0].rejections == result.rows[0].rejections);
  CHECK(again.trial_records[0].statistic == result.trial_records[0].statistic);
}

TEST_CASE("null calibration at small n") {
  SimulationPlan plan;
  plan.problem.kind = ProblemKind::sg;
  plan.problem.dx = 2;
  plan.problem.dy = 2;
  plan.method = Method::nfsic_med;
  plan.grid = {500.0};
  plan.trials = 200;
  plan.J = 5;
  plan.alpha = 0.05;
  plan.master_seed = 11;
  const auto result = simulate_rejection_rate(plan);
  const double band = 3.0 * std::sqrt(0.05 * 0.95 / plan.trials);
  CHECK(result.rows[0].rate >= 0.05 - band);
  CHECK(result.rows[0].rate <= 0.05 + band);
  CHECK(result.rows[0].failures == 0);
}

TEST_CASE("optimized power trends down as the sin frequency rises") {
  SimulationPlan plan;
  plan.problem.kind = ProblemKind::sin;
  plan.method = Method::nfsic_opt;
  plan.grid_kind = GridKind::omega;
  plan.grid = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  plan.n = 600;
  plan.trials = 25;
  plan.J = 5;
  plan.alpha = 0.05;
  plan.master_seed = 31;
  const auto result = simulate_rejection_rate(plan);
  REQUIRE(result.rows.size() == 6);

  // Spearman rank correlation (average ranks for ties) must not be positive.
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0.0, equal = 0.0;
      for (double other : v) {
        if (other < v[i]) ++less;
        if (other == v[i]) ++equal;
      }
      r[i] = less + 0.5 * (equal + 1.0);
    }
    return r;
  };
  std::vector<double> omegas, rates;
  for (const auto& row : result.rows) {
    omegas.push_back(row.grid_value);
    rates.push_back(row.rate);
  }
  const auto ro = ranks(omegas);
  const auto rr = ranks(rates);
  const double mo = 3.5, mr = 3.5;  // mean rank of 6 items
  double num = 0.0, do2 = 0.0, dr2 = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    num += (ro[i] - mo) * (rr[i] - mr);
    do2 += (ro[i] - mo) * (ro[i] - mo);
    dr2 += (rr[i] - mr) * (rr[i] - mr);
  }
  const double spearman = num / std::sqrt(do2 * std::max(dr2, 1e-12));
  CHECK(spearman <= 0.0);
  // The easy end should clearly beat the hard end.
  CHECK(result.rows[0].rate > result.rows[5].rate);
}

TEST_CASE("failed trials beyond one percent abort the run") {
  SimulationPlan plan;
  plan.problem.kind = ProblemKind::sg;
  plan.method = Method::qhsic;
  plan.grid = {3.0};  // hsic requires n >= 4, every trial fails
  plan.trials = 10;
  plan.master_seed = 1;
  CHECK_THROWS_AS(simulate_rejection_rate(plan), std::runtime_error);
}

TEST_CASE("qhsic size cap") {
  SimulationPlan plan;
  plan.problem.kind = ProblemKind::sg;
  plan.method = Method::qhsic;
  plan.grid = {30000.0};
  plan.trials = 1;
  CHECK_THROWS_AS(simulate_rejection_rate(plan), InputError);
}

TEST_CASE("power_vs_j_sweep is deterministic and in range") {
  ProblemSpec problem;
  problem.kind = ProblemKind::sin;
  problem.omega = 2.0;
  const auto a = power_vs_j_sweep(problem, {1, 5}, 200, 20, 0.05, 77);
  const auto b = power_vs_j_sweep(problem, {1, 5}, 200, 20, 0.05, 77);
  REQUIRE(a.size() == 2);
  CHECK(a[0].first == 1);
  CHECK(a[1].first == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].second == b[i].second);
    CHECK(a[i].second >= 0.0);
    CHECK(a[i].second <= 1.0);
  }
  ProblemSpec bad;
  bad.kind = ProblemKind::sg;
  CHECK_THROWS_AS(power_vs_j_sweep(bad, {1}, 100, 5, 0.05, 1), InputError);
}

}  // TEST_SUITE
