#pragma once

#include <cstdint>
#include <vector>

#include "nfsic/problems.hpp"
#include "nfsic/statistic.hpp"
#include "nfsic/tuning.hpp"

namespace nfsic {

// Inputs of the analytic test-power lower bound. c_tilde is the class
// constant sup ||Sigma^-1||_F; it is unobservable and supplied by the
// caller (default 1), or estimated from data via estimate_c_tilde.
struct PowerBoundInputs {
  double lambda_n;      // population statistic (plug-in in practice)
  double r;             // rejection threshold
  double n;             // sample size
  int J;                // number of test locations
  double gamma_n;       // ridge
  double B_k = 1.0;     // kernel bound, 1 for Gaussian
  double B_l = 1.0;
  double c_tilde = 1.0;
};

// Evaluates the printed three-term bound L(lambda_n) <= P(stat >= r).
// May be far below zero (vacuous regime); requires lambda_n >= r.
double power_lower_bound(const PowerBoundInputs& inputs);

// ||(Sigma + gamma I)^-1||_F from a computed state.
double estimate_c_tilde(const NfsicState& state);

enum class Method { nfsic_opt, nfsic_med, qhsic };

enum class GridKind { sample_size, omega, dimension };

struct SimulationPlan {
  ProblemSpec problem;
  Method method = Method::nfsic_med;
  GridKind grid_kind = GridKind::sample_size;
  std::vector<double> grid;  // n, omega, or dx values
  int n = 4000;              // sample size when the grid varies a parameter
  int trials = 300;
  double alpha = 0.05;
  int J = 10;
  std::uint64_t master_seed = 0;
  ThresholdMethod threshold = ThresholdMethod::chi2;  // nfsic methods
  int num_perms = 300;
  double gamma = kDefaultGamma;  // statistic ridge for nfsic_med
  TuningConfig tuning;        // nfsic_opt settings (seed is per-trial)
  int qhsic_n_cap = 20000;    // quadratic-cost guard
  bool override_n_cap = false;
};

struct TrialRecord {
  int grid_index;
  int trial;
  bool reject;
  bool failed;
  double statistic;
  double runtime_ms;
};

struct SimulationRow {
  double grid_value;
  int trials;
  int rejections;
  int failures;
  double rate;
  double mean_runtime_ms;
};

struct SimulationResult {
  std::vector<SimulationRow> rows;
  std::vector<TrialRecord> trial_records;  // grid-major, trial-minor
};

// Monte-Carlo rejection rates over the grid. Trials run in parallel with
// per-trial streams derived from (master_seed, grid index, trial index);
// results do not depend on the execution order. A failed trial counts in
// the denominator as a non-rejection; if failures exceed 1% of trials the
// run errors instead of silently biasing the rate.
SimulationResult simulate_rejection_rate(const SimulationPlan& plan);

// Rejection rate as a function of J on a 1-D Sin problem with random
// (non-optimized) locations drawn from Uniform((-pi, pi)^2) per trial and
// median-heuristic widths.
std::vector<std::pair<int, double>> power_vs_j_sweep(
    const ProblemSpec& problem, const std::vector<int>& j_grid, int n,
    int trials, double alpha, std::uint64_t seed);

}  // namespace nfsic
