// Command-line frontend: independence tests on CSV data, null / power
// simulations, synthetic data generation and witness-surface export.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nfsic/csv.hpp"
#include "nfsic/hsic.hpp"
#include "nfsic/power.hpp"
#include "nfsic/problems.hpp"
#include "nfsic/rng.hpp"
#include "nfsic/tuning.hpp"
#include "nfsic/version.hpp"

using nlohmann::json;
using namespace nfsic;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + out_path + "'");
  out << text;
}

std::string json_doc(const json& doc) { return doc.dump(2) + "\n"; }

ThresholdMethod parse_threshold(const std::string& name) {
  if (name == "chi2") return ThresholdMethod::chi2;
  if (name == "permutation") return ThresholdMethod::permutation;
  throw InputError("unknown threshold method '" + name + "'");
}

const char* threshold_name(ThresholdMethod m) {
  return m == ThresholdMethod::chi2 ? "chi2" : "permutation";
}

json locations_json(const TestLocations& locs) {
  json vs = json::array(), ws = json::array();
  for (int r = 0; r < locs.count(); ++r) {
    json vrow = json::array(), wrow = json::array();
    for (int d = 0; d < locs.vs.cols(); ++d) vrow.push_back(locs.vs(r, d));
    for (int d = 0; d < locs.ws.cols(); ++d) wrow.push_back(locs.ws(r, d));
    vs.push_back(vrow);
    ws.push_back(wrow);
  }
  return json{{"vs", vs}, {"ws", ws}};
}

json outcome_json(const TestOutcome& out, int n, int dx, int dy, int j,
                  const std::string& method) {
  json r{{"method", method},
         {"n", n},
         {"dx", dx},
         {"dy", dy},
         {"J", j},
         {"alpha", out.alpha},
         {"statistic", out.statistic},
         {"threshold", out.threshold},
         {"p_value", out.p_value},
         {"reject", out.reject},
         {"threshold_method", threshold_name(out.method)}};
  if (out.tuned) {
    r["tuned"] = json{{"sigma2_x", out.tuned->sigma2_x},
                      {"sigma2_y", out.tuned->sigma2_y},
                      {"locations", locations_json(out.tuned->locations)}};
  }
  return r;
}

std::string table_csv(const json& config, const SimulationResult& result,
                      bool timing) {
  std::ostringstream out;
  out << "# nfsic " << kVersion << "\n";
  out << "# config " << config.dump() << "\n";
  out << "grid_value,trials,rejections,rate,mean_runtime_ms\n";
  for (const auto& row : result.rows) {
    out << format_double(row.grid_value) << ',' << row.trials << ','
        << row.rejections << ',' << format_double(row.rate) << ','
        << format_double(timing ? row.mean_runtime_ms : 0.0) << "\n";
  }
  return out.str();
}

json table_json(const json& config, const SimulationResult& result,
                bool timing) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back(json{{"grid_value", row.grid_value},
                        {"trials", row.trials},
                        {"rejections", row.rejections},
                        {"failures", row.failures},
                        {"rate", row.rate},
                        {"mean_runtime_ms", timing ? row.mean_runtime_ms : 0.0}});
  }
  return json{{"version", kVersion}, {"config", config}, {"rows", rows}};
}

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string output = "json";
  std::string out_path;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_timing = false) {
  cmd->add_option("--seed", flags.seed, "RNG seed (default 0)");
  cmd->add_option("--output", flags.output, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", flags.out_path,
                  "Write the document here instead of stdout");
  if (with_timing) {
    cmd->add_flag("--timing,!--no-timing", flags.timing,
                  "Include measured wall times (breaks byte-reproducibility)");
  }
}

// ----- test -----------------------------------------------------------

struct TestArgs {
  std::string x_path, y_path;
  bool skip_header = false;
  std::string method = "nfsic";
  bool optimize = false;
  int j = 10;
  double alpha = 0.05;
  std::string threshold = "chi2";
  int perms = 300;
  double gamma = -1.0;  // resolved: kDefaultGamma, kAdaptiveGamma with --optimize
  double train_fraction = 0.5;
  int max_iters = 200;
  CommonFlags common;
};

int run_test(TestArgs args, bool threshold_given) {
  if (args.gamma < 0.0) {
    args.gamma = args.optimize ? kAdaptiveGamma : kDefaultGamma;
  }
  const Matrix xs = load_matrix_csv(args.x_path, args.skip_header);
  const Matrix ys = load_matrix_csv(args.y_path, args.skip_header);
  if (xs.rows() != ys.rows()) {
    throw InputError("row-count mismatch: x file has " +
                     std::to_string(xs.rows()) + " rows, y file has " +
                     std::to_string(ys.rows()) + " rows");
  }
  const JointSample sample(xs, ys);
  const ThresholdMethod threshold = parse_threshold(args.threshold);

  if (sample.n() < 1000 && threshold == ThresholdMethod::chi2 &&
      args.method != "qhsic") {
    std::cerr << "note: n = " << sample.n()
              << " is small for the asymptotic null; consider"
                 " --threshold permutation\n";
  }

  TestOutcome outcome{};
  std::string method_label = args.method;
  if (args.method == "qhsic") {
    if (args.optimize) {
      throw InputError("--optimize applies to method nfsic only");
    }
    if (threshold_given && threshold == ThresholdMethod::chi2) {
      throw InputError("qhsic supports only --threshold permutation");
    }
    const GaussianKernel kx = median_heuristic_kernel(
        sample.xs, 5000, derive_seed(args.common.seed, 3));
    const GaussianKernel ky = median_heuristic_kernel(
        sample.ys, 5000, derive_seed(args.common.seed, 4));
    outcome = hsic_test(sample, kx, ky, args.alpha, args.perms,
                        derive_seed(args.common.seed, 5));
  } else if (args.optimize) {
    TuningConfig config;
    config.train_fraction = args.train_fraction;
    config.max_iters = args.max_iters;
    config.gamma = args.gamma;
    config.seed = derive_seed(args.common.seed, 2);
    config.threshold = threshold;
    config.num_perms = args.perms;
    outcome = adaptive_test(sample, args.j, args.alpha, config);
    method_label = "nfsic-opt";
  } else {
    const GaussianKernel kx = median_heuristic_kernel(
        sample.xs, 5000, derive_seed(args.common.seed, 3));
    const GaussianKernel ky = median_heuristic_kernel(
        sample.ys, 5000, derive_seed(args.common.seed, 4));
    Rng loc_rng(derive_seed(args.common.seed, 2));
    Matrix vs(args.j, sample.dx()), ws(args.j, sample.dy());
    for (int r = 0; r < args.j; ++r) {
      for (int d = 0; d < sample.dx(); ++d) vs(r, d) = loc_rng.normal();
      for (int d = 0; d < sample.dy(); ++d) ws(r, d) = loc_rng.normal();
    }
    const TestLocations locs(std::move(vs), std::move(ws));
    if (threshold == ThresholdMethod::chi2) {
      outcome = test_chi2(nfsic_statistic(sample, kx, ky, locs, args.gamma),
                          args.j, args.alpha);
    } else {
      outcome = test_permutation(sample, kx, ky, locs, args.gamma, args.alpha,
                                 args.perms, derive_seed(args.common.seed, 5));
    }
    method_label = "nfsic-med";
  }

  const json config{{"x", args.x_path},
                    {"y", args.y_path},
                    {"skip_header", args.skip_header},
                    {"method", args.method},
                    {"optimize", args.optimize},
                    {"j", args.j},
                    {"alpha", args.alpha},
                    {"threshold", threshold_name(outcome.method)},
                    {"perms", args.perms},
                    {"gamma", args.gamma},
                    {"train_fraction", args.train_fraction},
                    {"max_iters", args.max_iters},
                    {"seed", args.common.seed},
                    {"output", args.common.output}};
  const json result = outcome_json(outcome, sample.n(), sample.dx(),
                                   sample.dy(), args.j, method_label);
  if (args.common.output == "csv") {
    std::ostringstream csv;
    csv << "# nfsic " << kVersion << "\n# config " << config.dump() << "\n";
    csv << "method,n,dx,dy,J,alpha,statistic,threshold,p_value,reject,"
           "threshold_method\n";
    csv << method_label << ',' << sample.n() << ',' << sample.dx() << ','
        << sample.dy() << ',' << args.j << ',' << format_double(args.alpha)
        << ',' << format_double(outcome.statistic) << ','
        << format_double(outcome.threshold) << ','
        << format_double(outcome.p_value) << ','
        << (outcome.reject ? "true" : "false") << ','
        << threshold_name(outcome.method) << "\n";
    emit(csv.str(), args.common.out_path);
  } else {
    emit(json_doc(json{{"version", kVersion},
                       {"command", "test"},
                       {"config", config},
                       {"result", result}}),
         args.common.out_path);
  }
  return 0;
}

// ----- gen ------------------------------------------------------------

struct GenArgs {
  std::string problem;
  int n = 0;
  int dx = 1;
  int dy = 1;
  double omega = 1.0;
  double noise_sd = 0.3;
  std::string out_x, out_y;
  CommonFlags common;
};

int run_gen(const GenArgs& args) {
  ProblemSpec spec;
  if (args.problem == "sg") {
    spec.kind = ProblemKind::sg;
    spec.dx = args.dx;
    spec.dy = args.dy;
  } else if (args.problem == "sin") {
    spec.kind = ProblemKind::sin;
    if (args.dx != 1 || args.dy != 1) {
      throw InputError("sin is a 1-D problem; dx and dy must be 1");
    }
    spec.omega = args.omega;
  } else if (args.problem == "gsign") {
    spec.kind = ProblemKind::gsign;
    spec.dx = args.dx;
    if (args.dy != 1) throw InputError("gsign has dy = 1");
  } else if (args.problem == "neglinear") {
    spec.kind = ProblemKind::neg_linear;
    if (args.dx != 1 || args.dy != 1) {
      throw InputError("neglinear is a 1-D problem; dx and dy must be 1");
    }
    spec.noise_sd = args.noise_sd;
  } else {
    throw InputError("unknown problem '" + args.problem + "'");
  }

  const JointSample sample = sample_problem(spec, args.n, args.common.seed);
  write_matrix_csv(args.out_x, sample.xs);
  write_matrix_csv(args.out_y, sample.ys);

  const json config{{"problem", args.problem}, {"n", args.n},
                    {"dx", args.dx},           {"dy", args.dy},
                    {"omega", args.omega},     {"noise_sd", args.noise_sd},
                    {"seed", args.common.seed}};
  emit(json_doc(json{{"version", kVersion},
                     {"command", "gen"},
                     {"config", config},
                     {"out_x", args.out_x},
                     {"out_y", args.out_y},
                     {"n", sample.n()},
                     {"dx", sample.dx()},
                     {"dy", sample.dy()}}),
       args.common.out_path);
  return 0;
}

// ----- simulation commands --------------------------------------------

Method parse_method(const std::string& name) {
  if (name == "nfsic-opt") return Method::nfsic_opt;
  if (name == "nfsic-med") return Method::nfsic_med;
  if (name == "qhsic") return Method::qhsic;
  throw InputError("unknown method '" + name + "'");
}

struct SimArgs {
  std::string problem = "sg";
  int dx = 5;
  int dy = 5;
  double omega = 1.0;
  std::vector<double> n_grid;
  std::vector<double> omega_grid;
  std::vector<double> dx_grid;
  int n = 4000;
  int trials = 300;
  double alpha = 0.05;
  int j = 10;
  std::string method;
  std::string threshold = "chi2";
  int perms = 300;
  double train_fraction = 0.5;
  int max_iters = 200;
  double gamma = -1.0;  // resolved: kAdaptiveGamma for nfsic-opt, else kDefaultGamma
  bool override_n_cap = false;
  CommonFlags common;
};

json sim_config(const SimArgs& args, const std::string& command) {
  return json{{"command", command},
              {"problem", args.problem},
              {"dx", args.dx},
              {"dy", args.dy},
              {"omega", args.omega},
              {"n_grid", args.n_grid},
              {"omega_grid", args.omega_grid},
              {"dx_grid", args.dx_grid},
              {"n", args.n},
              {"trials", args.trials},
              {"alpha", args.alpha},
              {"j", args.j},
              {"method", args.method},
              {"threshold", args.threshold},
              {"perms", args.perms},
              {"train_fraction", args.train_fraction},
              {"max_iters", args.max_iters},
              {"gamma", args.gamma},
              {"seed", args.common.seed},
              {"output", args.common.output},
              {"timing", args.common.timing}};
}

int run_simulation(SimArgs args, const std::string& command) {
  if (args.gamma < 0.0) {
    args.gamma = args.method == "nfsic-opt" ? kAdaptiveGamma : kDefaultGamma;
  }
  SimulationPlan plan;
  plan.gamma = args.gamma;
  if (args.problem == "sg") {
    plan.problem.kind = ProblemKind::sg;
    plan.problem.dx = args.dx;
    plan.problem.dy = args.dy;
  } else if (args.problem == "sin") {
    plan.problem.kind = ProblemKind::sin;
    plan.problem.omega = args.omega;
  } else if (args.problem == "gsign") {
    plan.problem.kind = ProblemKind::gsign;
    plan.problem.dx = args.dx;
  } else {
    throw InputError("unknown problem '" + args.problem + "'");
  }

  const int grids_given = (args.n_grid.empty() ? 0 : 1) +
                          (args.omega_grid.empty() ? 0 : 1) +
                          (args.dx_grid.empty() ? 0 : 1);
  if (grids_given > 1) {
    throw InputError("give at most one of --n-grid, --omega-grid, --dx-grid");
  }
  if (!args.omega_grid.empty()) {
    plan.grid_kind = GridKind::omega;
    plan.grid = args.omega_grid;
  } else if (!args.dx_grid.empty()) {
    plan.grid_kind = GridKind::dimension;
    plan.grid = args.dx_grid;
  } else if (!args.n_grid.empty()) {
    plan.grid_kind = GridKind::sample_size;
    plan.grid = args.n_grid;
  } else {
    plan.grid_kind = GridKind::sample_size;
    plan.grid = {static_cast<double>(args.n)};
  }

  plan.method = parse_method(args.method);
  plan.n = args.n;
  plan.trials = args.trials;
  plan.alpha = args.alpha;
  plan.J = args.j;
  plan.master_seed = args.common.seed;
  plan.threshold = parse_threshold(args.threshold);
  plan.num_perms = args.perms;
  plan.tuning.train_fraction = args.train_fraction;
  plan.tuning.max_iters = args.max_iters;
  plan.tuning.gamma = args.gamma;
  plan.override_n_cap = args.override_n_cap;

  const auto result = simulate_rejection_rate(plan);
  const json config = sim_config(args, command);
  if (args.common.output == "csv") {
    emit(table_csv(config, result, args.common.timing), args.common.out_path);
  } else {
    emit(json_doc(table_json(config, result, args.common.timing)),
         args.common.out_path);
  }
  return 0;
}

// ----- sweep-j ---------------------------------------------------------

struct SweepArgs {
  double omega = 2.0;
  int n = 800;
  std::vector<int> j_grid;
  int trials = 500;
  double alpha = 0.05;
  CommonFlags common;
};

int run_sweep_j(const SweepArgs& args) {
  ProblemSpec problem;
  problem.kind = ProblemKind::sin;
  problem.omega = args.omega;

  std::vector<SimulationRow> rows;
  for (int j : args.j_grid) {
    const auto start = std::chrono::steady_clock::now();
    const auto table = power_vs_j_sweep(problem, {j}, args.n, args.trials,
                                        args.alpha, args.common.seed);
    const double elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    SimulationRow row;
    row.grid_value = j;
    row.trials = args.trials;
    row.rejections =
        static_cast<int>(std::lround(table[0].second * args.trials));
    row.failures = 0;
    row.rate = table[0].second;
    row.mean_runtime_ms = elapsed / args.trials;
    rows.push_back(row);
  }
  SimulationResult result;
  result.rows = std::move(rows);

  const json config{{"command", "sweep-j"},     {"omega", args.omega},
                    {"n", args.n},              {"j_grid", args.j_grid},
                    {"trials", args.trials},    {"alpha", args.alpha},
                    {"seed", args.common.seed}, {"output", args.common.output},
                    {"timing", args.common.timing}};
  if (args.common.output == "csv") {
    emit(table_csv(config, result, args.common.timing), args.common.out_path);
  } else {
    emit(json_doc(table_json(config, result, args.common.timing)),
         args.common.out_path);
  }
  return 0;
}

// ----- witness ----------------------------------------------------------

struct WitnessArgs {
  std::string x_path, y_path;
  bool skip_header = false;
  int grid_v = 50;
  int grid_w = 50;
  double gamma = kDefaultGamma;
  CommonFlags common;
};

int run_witness(const WitnessArgs& args) {
  const Matrix xs = load_matrix_csv(args.x_path, args.skip_header);
  const Matrix ys = load_matrix_csv(args.y_path, args.skip_header);
  if (xs.cols() != 1 || ys.cols() != 1) {
    throw InputError("witness requires 1-D x and y data");
  }
  if (xs.rows() != ys.rows()) {
    throw InputError("row-count mismatch: x file has " +
                     std::to_string(xs.rows()) + " rows, y file has " +
                     std::to_string(ys.rows()) + " rows");
  }
  if (args.grid_v < 2 || args.grid_w < 2) {
    throw InputError("grid sizes must be at least 2");
  }
  const JointSample sample(xs, ys);
  const GaussianKernel kx = median_heuristic_kernel(
      sample.xs, 5000, derive_seed(args.common.seed, 3));
  const GaussianKernel ky = median_heuristic_kernel(
      sample.ys, 5000, derive_seed(args.common.seed, 4));

  auto range_of = [](const Matrix& col) {
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().mean());
    return std::pair<double, double>{col.minCoeff() - sd, col.maxCoeff() + sd};
  };
  const auto [v_lo, v_hi] = range_of(xs);
  const auto [w_lo, w_hi] = range_of(ys);

  Matrix vs(args.grid_v * args.grid_w, 1), ws(args.grid_v * args.grid_w, 1);
  for (int a = 0; a < args.grid_v; ++a) {
    const double v = v_lo + (v_hi - v_lo) * a / (args.grid_v - 1);
    for (int b = 0; b < args.grid_w; ++b) {
      const double w = w_lo + (w_hi - w_lo) * b / (args.grid_w - 1);
      vs(a * args.grid_w + b, 0) = v;
      ws(a * args.grid_w + b, 0) = w;
    }
  }
  const TestLocations grid(vs, ws);
  const auto pts = witness_surface(sample, kx, ky, grid, args.gamma);

  const json config{{"x", args.x_path},        {"y", args.y_path},
                    {"grid_v", args.grid_v},   {"grid_w", args.grid_w},
                    {"gamma", args.gamma},     {"seed", args.common.seed},
                    {"sigma2_x", kx.width_sq}, {"sigma2_y", ky.width_sq}};
  std::ostringstream out;
  out << "# nfsic " << kVersion << "\n# config " << config.dump() << "\n";
  out << "v,w,mu_xy_hat,mu_x_mu_y_hat,sigma_hat,lambda_hat\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    out << format_double(grid.vs(idx, 0)) << ','
        << format_double(grid.ws(idx, 0)) << ','
        << format_double(pts[i].mu_xy) << ','
        << format_double(pts[i].mu_x_mu_y) << ','
        << format_double(pts[i].sigma) << ','
        << format_double(pts[i].lambda) << "\n";
  }
  emit(out.str(), args.common.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NFSIC adaptive independence test"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("nfsic ") + kVersion);

  TestArgs test_args;
  auto* cmd_test =
      app.add_subcommand("test", "Run an independence test on CSV data");
  cmd_test->add_option("--x", test_args.x_path, "X data CSV")->required();
  cmd_test->add_option("--y", test_args.y_path, "Y data CSV")->required();
  cmd_test->add_flag("--skip-header", test_args.skip_header,
                     "Skip one header line");
  cmd_test->add_option("--method", test_args.method, "nfsic or qhsic")
      ->check(CLI::IsMember({"nfsic", "qhsic"}));
  cmd_test->add_flag("--optimize", test_args.optimize,
                     "Tune widths and locations on a training split");
  cmd_test->add_option("--j", test_args.j, "Number of test locations")
      ->check(CLI::PositiveNumber);
  cmd_test->add_option("--alpha", test_args.alpha, "Significance level");
  auto* thr_opt = cmd_test
                      ->add_option("--threshold", test_args.threshold,
                                   "chi2 or permutation")
                      ->check(CLI::IsMember({"chi2", "permutation"}));
  cmd_test->add_option("--perms", test_args.perms, "Permutation count");
  cmd_test->add_option("--gamma", test_args.gamma, "Covariance ridge");
  cmd_test->add_option("--train-fraction", test_args.train_fraction,
                       "Training fraction for --optimize");
  cmd_test->add_option("--max-iters", test_args.max_iters,
                       "Gradient-ascent iteration cap");
  add_common(cmd_test, test_args.common);

  GenArgs gen_args;
  auto* cmd_gen =
      app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
  cmd_gen->add_option("problem", gen_args.problem,
                      "sg, sin, gsign or neglinear")
      ->required();
  cmd_gen->add_option("--n", gen_args.n, "Rows")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_gen->add_option("--dx", gen_args.dx, "X dimension");
  cmd_gen->add_option("--dy", gen_args.dy, "Y dimension");
  cmd_gen->add_option("--omega", gen_args.omega, "Sin frequency");
  cmd_gen->add_option("--noise-sd", gen_args.noise_sd, "Neglinear noise sd");
  cmd_gen->add_option("--out-x", gen_args.out_x, "X output CSV")->required();
  cmd_gen->add_option("--out-y", gen_args.out_y, "Y output CSV")->required();
  add_common(cmd_gen, gen_args.common);

  SimArgs null_args;
  null_args.method = "nfsic-med";
  auto* cmd_null =
      app.add_subcommand("null-sim", "Type-I-error calibration on SG data");
  cmd_null->add_option("--dx", null_args.dx, "X dimension");
  cmd_null->add_option("--dy", null_args.dy, "Y dimension");
  cmd_null->add_option("--n", null_args.n, "Sample size");
  cmd_null->add_option("--n-grid", null_args.n_grid, "Sample-size grid")
      ->delimiter(',');
  cmd_null->add_option("--trials", null_args.trials, "Monte-Carlo trials");
  cmd_null->add_option("--alpha", null_args.alpha, "Significance level");
  cmd_null->add_option("--j", null_args.j, "Number of test locations");
  cmd_null
      ->add_option("--method", null_args.method,
                   "nfsic-med, nfsic-opt or qhsic")
      ->check(CLI::IsMember({"nfsic-med", "nfsic-opt", "qhsic"}));
  cmd_null->add_option("--threshold", null_args.threshold,
                       "chi2 or permutation")
      ->check(CLI::IsMember({"chi2", "permutation"}));
  cmd_null->add_option("--perms", null_args.perms, "Permutation count");
  cmd_null->add_option("--train-fraction", null_args.train_fraction,
                       "Training fraction");
  cmd_null->add_option("--max-iters", null_args.max_iters,
                       "Gradient-ascent cap");
  cmd_null->add_option("--gamma", null_args.gamma, "Covariance ridge");
  cmd_null->add_flag("--override-n-cap", null_args.override_n_cap,
                     "Allow qhsic beyond n = 20000");
  add_common(cmd_null, null_args.common, true);

  SimArgs power_args;
  power_args.problem = "sin";
  power_args.method = "nfsic-opt";
  auto* cmd_power =
      app.add_subcommand("power", "Power simulation on a dependent problem");
  cmd_power->add_option("--problem", power_args.problem, "sin, gsign or sg")
      ->check(CLI::IsMember({"sin", "gsign", "sg"}));
  cmd_power->add_option("--dx", power_args.dx, "X dimension (gsign, sg)");
  cmd_power->add_option("--dy", power_args.dy, "Y dimension (sg)");
  cmd_power->add_option("--omega", power_args.omega, "Sin frequency");
  cmd_power->add_option("--n", power_args.n, "Sample size");
  cmd_power->add_option("--n-grid", power_args.n_grid, "Sample-size grid")
      ->delimiter(',');
  cmd_power->add_option("--omega-grid", power_args.omega_grid,
                        "Frequency grid")
      ->delimiter(',');
  cmd_power->add_option("--dx-grid", power_args.dx_grid, "Dimension grid")
      ->delimiter(',');
  cmd_power->add_option("--trials", power_args.trials, "Monte-Carlo trials");
  cmd_power->add_option("--alpha", power_args.alpha, "Significance level");
  cmd_power->add_option("--j", power_args.j, "Number of test locations");
  cmd_power
      ->add_option("--method", power_args.method,
                   "nfsic-opt, nfsic-med or qhsic")
      ->check(CLI::IsMember({"nfsic-med", "nfsic-opt", "qhsic"}));
  cmd_power->add_option("--threshold", power_args.threshold,
                        "chi2 or permutation")
      ->check(CLI::IsMember({"chi2", "permutation"}));
  cmd_power->add_option("--perms", power_args.perms, "Permutation count");
  cmd_power->add_option("--train-fraction", power_args.train_fraction,
                        "Training fraction");
  cmd_power->add_option("--max-iters", power_args.max_iters,
                        "Gradient-ascent cap");
  cmd_power->add_option("--gamma", power_args.gamma, "Covariance ridge");
  cmd_power->add_flag("--override-n-cap", power_args.override_n_cap,
                      "Allow qhsic beyond n = 20000");
  add_common(cmd_power, power_args.common, true);

  SweepArgs sweep_args;
  auto* cmd_sweep =
      app.add_subcommand("sweep-j", "Power as a function of J on Sin data");
  cmd_sweep->add_option("--omega", sweep_args.omega, "Sin frequency");
  cmd_sweep->add_option("--n", sweep_args.n, "Sample size");
  cmd_sweep->add_option("--j-grid", sweep_args.j_grid, "J grid")
      ->delimiter(',')
      ->required();
  cmd_sweep->add_option("--trials", sweep_args.trials, "Monte-Carlo trials");
  cmd_sweep->add_option("--alpha", sweep_args.alpha, "Significance level");
  add_common(cmd_sweep, sweep_args.common, true);

  WitnessArgs witness_args;
  auto* cmd_witness =
      app.add_subcommand("witness", "Export the J=1 statistic surfaces");
  cmd_witness->add_option("--x", witness_args.x_path, "X data CSV (1-D)")
      ->required();
  cmd_witness->add_option("--y", witness_args.y_path, "Y data CSV (1-D)")
      ->required();
  cmd_witness->add_flag("--skip-header", witness_args.skip_header,
                        "Skip one header line");
  cmd_witness->add_option("--grid-v", witness_args.grid_v,
                          "Grid points along v");
  cmd_witness->add_option("--grid-w", witness_args.grid_w,
                          "Grid points along w");
  cmd_witness->add_option("--gamma", witness_args.gamma, "Covariance ridge");
  add_common(cmd_witness, witness_args.common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_test) return run_test(test_args, thr_opt->count() > 0);
    if (*cmd_gen) return run_gen(gen_args);
    if (*cmd_null) return run_simulation(null_args, "null-sim");
    if (*cmd_power) return run_simulation(power_args, "power");
    if (*cmd_sweep) return run_sweep_j(sweep_args);
    if (*cmd_witness) return run_witness(witness_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
