#include "nfsic/power.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <numbers>

#include "nfsic/hsic.hpp"
#include "nfsic/parallel.hpp"
#include "nfsic/rng.hpp"

namespace nfsic {

double power_lower_bound(const PowerBoundInputs& in) {
  if (in.lambda_n < in.r) {
    throw InputError("power_lower_bound: requires lambda_n >= r");
  }
  if (in.J < 1 || !(in.n >= 2.0) || !(in.gamma_n > 0.0) || !(in.B_k > 0.0) ||
      !(in.B_l > 0.0) || !(in.c_tilde > 0.0)) {
    throw InputError("power_lower_bound: constants must be positive, n >= 2");
  }
  const double bk = in.B_k, bl = in.B_l;
  const double b = bk * bl;
  const double j = static_cast<double>(in.J);
  const double b_star =
      (1.0 / 144.0) *
      std::max({2.0 * std::pow(b, 4), 8.0 * std::pow(std::max(b * bk, bl), 4),
                8.0 * std::pow(std::max(b * bl, bk), 4),
                18.0 * std::pow(std::max({b, bk, bl}), 6),
                18.0 * std::pow(std::max(bk * bk, bl), 6),
                18.0 * std::pow(std::max(bk, bl * bl), 6),
                32.0 * 9.0 * std::pow(std::max(bk, bl), 8)});
  const double c1 = 4.0 * b * b * j * std::sqrt(j) * in.c_tilde;
  const double c2 = 4.0 * b * std::sqrt(j) * in.c_tilde;
  const double c3 = 4.0 * b * b * j * in.c_tilde * in.c_tilde;
  const double xi1 = 1.0 / (9.0 * c1 * c1 * j * j * b_star);
  const double xi2 = 72.0 * c2 * c2 * j * b * b;
  const double xi3 = 8.0 * c1 * b * b * j;
  const double xi4 = 256.0 * std::pow(b, 4) * j * j * c1 * c1;

  const double n = in.n;
  const double gap = in.lambda_n - in.r;
  const double g = in.gamma_n;
  const double t1 = 62.0 * std::exp(-xi1 * g * g * gap * gap / n);
  const double t2 =
      2.0 * std::exp(-std::floor(0.5 * n) * gap * gap / (xi2 * n * n));
  const double num = gap * g * (n - 1.0) / 3.0 - xi3 * n - c3 * g * g * n * (n - 1.0);
  const double t3 = 2.0 * std::exp(-num * num / (xi4 * n * n * (n - 1.0)));
  return 1.0 - t1 - t2 - t3;
}

double estimate_c_tilde(const NfsicState& state) {
  Matrix a = state.sigma_hat;
  a.diagonal().array() += state.gamma;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularCovarianceError("estimate_c_tilde: singular covariance");
  }
  const Matrix inv =
      llt.solve(Matrix::Identity(a.rows(), a.cols()));
  return inv.norm();
}

namespace {

struct ResolvedPoint {
  ProblemSpec problem;
  int n;
};

ResolvedPoint resolve(const SimulationPlan& plan, double grid_value) {
  ResolvedPoint pt{plan.problem, plan.n};
  switch (plan.grid_kind) {
    case GridKind::sample_size:
      pt.n = static_cast<int>(grid_value);
      break;
    case GridKind::omega:
      pt.problem.omega = grid_value;
      break;
    case GridKind::dimension:
      pt.problem.dx = static_cast<int>(grid_value);
      if (pt.problem.kind == ProblemKind::sg) {
        pt.problem.dy = static_cast<int>(grid_value);
      }
      break;
  }
  return pt;
}

TestOutcome run_nfsic_med(const SimulationPlan& plan, const JointSample& sample,
                          std::uint64_t seed) {
  const GaussianKernel kx =
      median_heuristic_kernel(sample.xs, 5000, derive_seed(seed, 3));
  const GaussianKernel ky =
      median_heuristic_kernel(sample.ys, 5000, derive_seed(seed, 4));
  Rng loc_rng(derive_seed(seed, 2));
  Matrix vs(plan.J, sample.dx()), ws(plan.J, sample.dy());
  for (int r = 0; r < plan.J; ++r) {
    for (int d = 0; d < sample.dx(); ++d) vs(r, d) = loc_rng.normal();
    for (int d = 0; d < sample.dy(); ++d) ws(r, d) = loc_rng.normal();
  }
  const TestLocations locs(std::move(vs), std::move(ws));
  if (plan.threshold == ThresholdMethod::chi2) {
    return test_chi2(nfsic_statistic(sample, kx, ky, locs, plan.gamma),
                     plan.J, plan.alpha);
  }
  return test_permutation(sample, kx, ky, locs, plan.gamma, plan.alpha,
                          plan.num_perms, derive_seed(seed, 5));
}

TestOutcome run_trial(const SimulationPlan& plan, const ResolvedPoint& pt,
                      std::uint64_t seed) {
  const JointSample sample =
      sample_problem(pt.problem, pt.n, derive_seed(seed, 1));
  switch (plan.method) {
    case Method::nfsic_med:
      return run_nfsic_med(plan, sample, seed);
    case Method::nfsic_opt: {
      TuningConfig tc = plan.tuning;
      tc.seed = derive_seed(seed, 2);
      tc.threshold = plan.threshold;
      tc.num_perms = plan.num_perms;
      return adaptive_test(sample, plan.J, plan.alpha, tc);
    }
    case Method::qhsic: {
      const GaussianKernel kx =
          median_heuristic_kernel(sample.xs, 5000, derive_seed(seed, 3));
      const GaussianKernel ky =
          median_heuristic_kernel(sample.ys, 5000, derive_seed(seed, 4));
      return hsic_test(sample, kx, ky, plan.alpha, plan.num_perms,
                       derive_seed(seed, 5));
    }
  }
  throw InputError("run_trial: unknown method");
}

}  // namespace

SimulationResult simulate_rejection_rate(const SimulationPlan& plan) {
  if (plan.grid.empty()) throw InputError("simulate: empty grid");
  if (plan.trials < 1) throw InputError("simulate: trials must be >= 1");
  if (plan.method == Method::qhsic && !plan.override_n_cap) {
    for (double gv : plan.grid) {
      const int n = resolve(plan, gv).n;
      if (n > plan.qhsic_n_cap) {
        throw InputError(
            "simulate: qhsic at n > " + std::to_string(plan.qhsic_n_cap) +
            " is quadratic-cost; pass the override flag to proceed");
      }
    }
  }

  const int g_count = static_cast<int>(plan.grid.size());
  const int total = g_count * plan.trials;
  SimulationResult result;
  result.trial_records.resize(static_cast<std::size_t>(total));

  parallel_for(total, [&](int task) {
    const int gi = task / plan.trials;
    const int trial = task % plan.trials;
    const ResolvedPoint pt = resolve(plan, plan.grid[gi]);
    const std::uint64_t seed = derive_seed(
        plan.master_seed, static_cast<std::uint64_t>(gi),
        static_cast<std::uint64_t>(trial));
    TrialRecord rec{gi, trial, false, false, 0.0, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const TestOutcome outcome = run_trial(plan, pt, seed);
      rec.reject = outcome.reject;
      rec.statistic = outcome.statistic;
    } catch (const std::exception&) {
      rec.failed = true;
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.trial_records[static_cast<std::size_t>(task)] = rec;
  });

  result.rows.reserve(static_cast<std::size_t>(g_count));
  for (int gi = 0; gi < g_count; ++gi) {
    SimulationRow row{plan.grid[gi], plan.trials, 0, 0, 0.0, 0.0};
    double time_sum = 0.0;
    for (int t = 0; t < plan.trials; ++t) {
      const auto& rec =
          result.trial_records[static_cast<std::size_t>(gi * plan.trials + t)];
      row.rejections += rec.reject ? 1 : 0;
      row.failures += rec.failed ? 1 : 0;
      time_sum += rec.runtime_ms;
    }
    if (row.failures * 100 > plan.trials) {
      throw std::runtime_error(
          "simulate: more than 1% of trials failed at grid value " +
          std::to_string(plan.grid[gi]));
    }
    row.rate = static_cast<double>(row.rejections) / plan.trials;
    row.mean_runtime_ms = time_sum / plan.trials;
    result.rows.push_back(row);
  }
  return result;
}

std::vector<std::pair<int, double>> power_vs_j_sweep(
    const ProblemSpec& problem, const std::vector<int>& j_grid, int n,
    int trials, double alpha, std::uint64_t seed) {
  if (problem.kind != ProblemKind::sin) {
    throw InputError("power_vs_j_sweep: requires the sin problem");
  }
  if (j_grid.empty()) throw InputError("power_vs_j_sweep: empty J grid");
  constexpr double pi = std::numbers::pi;

  std::vector<std::pair<int, double>> table;
  table.reserve(j_grid.size());
  for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
    const int J = j_grid[ji];
    if (J < 1) throw InputError("power_vs_j_sweep: J must be >= 1");
    std::vector<int> rejects(static_cast<std::size_t>(trials), 0);
    parallel_for(trials, [&](int t) {
      const std::uint64_t trial_seed = derive_seed(
          seed, static_cast<std::uint64_t>(ji), static_cast<std::uint64_t>(t));
      const JointSample sample =
          sample_sin(n, problem.omega, derive_seed(trial_seed, 1));
      Rng loc_rng(derive_seed(trial_seed, 2));
      Matrix vs(J, 1), ws(J, 1);
      for (int r = 0; r < J; ++r) {
        vs(r, 0) = loc_rng.uniform(-pi, pi);
        ws(r, 0) = loc_rng.uniform(-pi, pi);
      }
      const GaussianKernel kx =
          median_heuristic_kernel(sample.xs, 5000, derive_seed(trial_seed, 3));
      const GaussianKernel ky =
          median_heuristic_kernel(sample.ys, 5000, derive_seed(trial_seed, 4));
      const auto outcome = test_chi2(
          nfsic_statistic(sample, kx, ky,
                          TestLocations(std::move(vs), std::move(ws))),
          J, alpha);
      rejects[static_cast<std::size_t>(t)] = outcome.reject ? 1 : 0;
    });
    int count = 0;
    for (int r : rejects) count += r;
    table.emplace_back(J, static_cast<double>(count) / trials);
  }
  return table;
}

}  // namespace nfsic
