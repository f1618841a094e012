// Drives the installed CLI binary end to end. The binary path comes from
// the NFSIC_CLI_BIN environment variable (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string g_cli;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "/tmp/nfsic_cli_out_" + std::to_string(counter);
  const std::string err_path = "/tmp/nfsic_cli_err_" + std::to_string(counter);
  ++counter;
  const std::string cmd =
      g_cli + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen writes matrices of the requested shape") {
  auto r = run("gen sg --n 10 --dx 3 --dy 2 --seed 1 --out-x /tmp/nfsic_gx.csv"
               " --out-y /tmp/nfsic_gy.csv");
  REQUIRE(r.exit_code == 0);
  const std::string gx = slurp("/tmp/nfsic_gx.csv");
  const std::string gy = slurp("/tmp/nfsic_gy.csv");
  CHECK(count_lines(gx) == 10);
  CHECK(count_lines(gy) == 10);
  CHECK(std::count(gx.begin(), gx.end(), ',') == 10 * 2);  // 3 cols
  CHECK(std::count(gy.begin(), gy.end(), ',') == 10 * 1);  // 2 cols
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["command"] == "gen");
  CHECK(doc["config"]["n"] == 10);
}

TEST_CASE("gen is byte-identical under a fixed seed") {
  REQUIRE(run("gen sin --omega 2 --n 50 --seed 7 --out-x /tmp/nfsic_a1.csv"
              " --out-y /tmp/nfsic_a2.csv")
              .exit_code == 0);
  REQUIRE(run("gen sin --omega 2 --n 50 --seed 7 --out-x /tmp/nfsic_b1.csv"
              " --out-y /tmp/nfsic_b2.csv")
              .exit_code == 0);
  CHECK(slurp("/tmp/nfsic_a1.csv") == slurp("/tmp/nfsic_b1.csv"));
  CHECK(slurp("/tmp/nfsic_a2.csv") == slurp("/tmp/nfsic_b2.csv"));
  CHECK(!slurp("/tmp/nfsic_a1.csv").empty());
}

TEST_CASE("gen then test round-trips and exits zero regardless of decision") {
  REQUIRE(run("gen sg --n 120 --dx 2 --dy 2 --seed 3 --out-x /tmp/nfsic_rx.csv"
              " --out-y /tmp/nfsic_ry.csv")
              .exit_code == 0);
  const auto r =
      run("test --x /tmp/nfsic_rx.csv --y /tmp/nfsic_ry.csv --j 4 --seed 5");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const auto& res = doc["result"];
  CHECK(res["p_value"].get<double>() >= 0.0);
  CHECK(res["p_value"].get<double>() <= 1.0);
  CHECK(res["reject"].is_boolean());
  CHECK(res["n"] == 120);
  CHECK(res["threshold_method"] == "chi2");

  // Strongly dependent data: still exit 0 with reject = true.
  REQUIRE(run("gen neglinear --n 1500 --seed 4 --out-x /tmp/nfsic_dx.csv"
              " --out-y /tmp/nfsic_dy.csv")
              .exit_code == 0);
  const auto dep =
      run("test --x /tmp/nfsic_dx.csv --y /tmp/nfsic_dy.csv --j 5 --seed 6");
  REQUIRE(dep.exit_code == 0);
  CHECK(nlohmann::json::parse(dep.out)["result"]["reject"].get<bool>());
}

TEST_CASE("row-count mismatch names both counts") {
  {
    std::ofstream x("/tmp/nfsic_mx.csv");
    for (int i = 0; i < 100; ++i) x << i << "\n";
    std::ofstream y("/tmp/nfsic_my.csv");
    for (int i = 0; i < 99; ++i) y << i << "\n";
  }
  const auto r = run("test --x /tmp/nfsic_mx.csv --y /tmp/nfsic_my.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("100") != std::string::npos);
  CHECK(r.err.find("99") != std::string::npos);
}

TEST_CASE("ragged and non-finite CSV inputs are parse errors") {
  {
    std::ofstream x("/tmp/nfsic_ragged.csv");
    x << "1,2\n3\n";
  }
  auto r = run("test --x /tmp/nfsic_ragged.csv --y /tmp/nfsic_ragged.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("row 2") != std::string::npos);

  {
    std::ofstream x("/tmp/nfsic_nan.csv");
    x << "1\nnan\n";
  }
  r = run("test --x /tmp/nfsic_nan.csv --y /tmp/nfsic_nan.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.find("non-finite") != std::string::npos);
}

TEST_CASE("unknown flags are rejected") {
  const auto r = run("test --x a.csv --y b.csv --frobnicate");
  CHECK(r.exit_code != 0);
}

TEST_CASE("small-n chi2 run prints the permutation hint") {
  REQUIRE(run("gen sg --n 80 --seed 2 --out-x /tmp/nfsic_hx.csv"
              " --out-y /tmp/nfsic_hy.csv")
              .exit_code == 0);
  const auto r =
      run("test --x /tmp/nfsic_hx.csv --y /tmp/nfsic_hy.csv --j 2 --seed 1");
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("permutation") != std::string::npos);
}

TEST_CASE("test config echoes the input flags") {
  const auto r = run(
      "test --x /tmp/nfsic_rx.csv --y /tmp/nfsic_ry.csv --j 7 --alpha 0.01"
      " --threshold permutation --perms 60 --seed 11");
  REQUIRE(r.exit_code == 0);
  const auto cfg = nlohmann::json::parse(r.out)["config"];
  CHECK(cfg["j"] == 7);
  CHECK(cfg["alpha"] == 0.01);
  CHECK(cfg["threshold"] == "permutation");
  CHECK(cfg["perms"] == 60);
  CHECK(cfg["seed"] == 11);
}

TEST_CASE("optimized test works with a permutation threshold") {
  const auto r = run(
      "test --x /tmp/nfsic_rx.csv --y /tmp/nfsic_ry.csv --optimize"
      " --threshold permutation --perms 40 --j 3 --max-iters 15 --seed 2");
  REQUIRE(r.exit_code == 0);
  const auto res = nlohmann::json::parse(r.out)["result"];
  CHECK(res["threshold_method"] == "permutation");
  CHECK(res["method"] == "nfsic-opt");
  CHECK(res.contains("tuned"));
  CHECK(res["tuned"]["sigma2_x"].get<double>() > 0.0);
}

TEST_CASE("qhsic runs with a permutation threshold only") {
  auto r = run("test --x /tmp/nfsic_rx.csv --y /tmp/nfsic_ry.csv"
               " --method qhsic --perms 50 --seed 3");
  REQUIRE(r.exit_code == 0);
  CHECK(nlohmann::json::parse(r.out)["result"]["threshold_method"] ==
        "permutation");
  r = run("test --x /tmp/nfsic_rx.csv --y /tmp/nfsic_ry.csv --method qhsic"
          " --threshold chi2");
  CHECK(r.exit_code != 0);
  r = run("test --x /tmp/nfsic_rx.csv --y /tmp/nfsic_ry.csv --method qhsic"
          " --optimize");
  CHECK(r.exit_code != 0);
}

TEST_CASE("witness grid size is respected and the surface finds dependence") {
  REQUIRE(run("gen neglinear --n 1000 --seed 8 --out-x /tmp/nfsic_wx.csv"
              " --out-y /tmp/nfsic_wy.csv")
              .exit_code == 0);
  const auto r = run("witness --x /tmp/nfsic_wx.csv --y /tmp/nfsic_wy.csv"
                     " --grid-v 12 --grid-w 9 --seed 1");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int data_rows = 0;
  bool saw_header = false;
  double max_lambda = 0.0;
  while (std::getline(lines, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    if (line.rfind("v,w,", 0) == 0) {
      saw_header = true;
      continue;
    }
    ++data_rows;
    const auto last_comma = line.rfind(',');
    const double lambda = std::stod(line.substr(last_comma + 1));
    CHECK(lambda >= 0.0);
    max_lambda = std::max(max_lambda, lambda);
  }
  CHECK(saw_header);
  CHECK(data_rows == 12 * 9);
  // Strongly dependent data: the surface maximum clears the chi2(1)
  // 0.95 quantile by a wide margin.
  CHECK(max_lambda > 3.841459);
}

TEST_CASE("simulation output does not depend on the worker count") {
  const std::string flags =
      "power --problem sin --omega-grid 1,2 --n 250 --trials 12"
      " --method nfsic-med --j 3 --seed 13 --output csv";
  const std::string plain = run(flags).out;
  const std::string out_path = "/tmp/nfsic_cli_single";
  const std::string cmd = "NFSIC_THREADS=1 " + g_cli + " " + flags + " >" +
                          out_path + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(slurp(out_path) == plain);
  std::remove(out_path.c_str());
}

TEST_CASE("table commands have the documented schema") {
  const auto r = run("null-sim --n 300 --dx 2 --dy 2 --trials 25 --j 4"
                     " --seed 5 --output csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("grid_value,trials,rejections,rate,mean_runtime_ms") !=
        std::string::npos);
  CHECK(r.out.find("# config") != std::string::npos);

  const auto p = run("power --problem sin --omega-grid 1,2,3 --n 300"
                     " --trials 8 --method nfsic-med --j 3 --seed 6");
  REQUIRE(p.exit_code == 0);
  const auto doc = nlohmann::json::parse(p.out);
  REQUIRE(doc["rows"].size() == 3);
  for (const auto& row : doc["rows"]) {
    const double rate = row["rate"].get<double>();
    CHECK(rate >= 0.0);
    CHECK(rate <= 1.0);
  }
  CHECK(doc["config"]["omega_grid"].size() == 3);
}

TEST_CASE("simulation commands reproduce byte-for-byte") {
  const std::string flags =
      "null-sim --n 250 --dx 1 --dy 1 --trials 20 --j 3 --seed 9 --output csv";
  const auto a = run(flags);
  const auto b = run(flags);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  const std::string sweep =
      "sweep-j --j-grid 1,4 --n 150 --trials 10 --seed 2 --output csv";
  CHECK(run(sweep).out == run(sweep).out);
}

}  // TEST_SUITE

// Slow end-to-end check, registered as its own ctest entry.
TEST_SUITE("cli_gsign") {

TEST_CASE("optimized test detects the gsign interaction on most seeds") {
  REQUIRE(run("gen gsign --n 4000 --dx 4 --seed 21 --out-x /tmp/nfsic_gsx.csv"
              " --out-y /tmp/nfsic_gsy.csv")
              .exit_code == 0);
  int rejects = 0;
  for (int seed = 0; seed < 10; ++seed) {
    const auto r = run("test --x /tmp/nfsic_gsx.csv --y /tmp/nfsic_gsy.csv"
                       " --optimize --j 10 --seed " + std::to_string(seed));
    REQUIRE(r.exit_code == 0);
    if (nlohmann::json::parse(r.out)["result"]["reject"].get<bool>()) {
      ++rejects;
    }
  }
  CHECK(rejects >= 8);
}

}  // TEST_SUITE

int main(int argc, char** argv) {
  const char* cli = std::getenv("NFSIC_CLI_BIN");
  if (cli == nullptr) {
    std::fprintf(stderr, "NFSIC_CLI_BIN is not set\n");
    return 2;
  }
  g_cli = cli;
  return doctest::Context(argc, argv).run();
}
