#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "doctest.h"
#include "nfsic/csv.hpp"
#include "nfsic/rng.hpp"

using namespace nfsic;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content = "")
      : path("/tmp/nfsic_test_" + name) {
    if (!content.empty()) {
      std::ofstream out(path);
      out << content;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("round trip preserves values") {
  Matrix m(3, 2);
  m << 1.0, -2.5e-17, 3.14159265358979312, 1e300, -0.0, 42.0;
  TempFile f("roundtrip.csv");
  write_matrix_csv(f.path, m);
  const Matrix back = load_matrix_csv(f.path);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 2);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ragged rows are diagnosed") {
  TempFile f("ragged.csv", "1,2,3\n4,5\n");
  try {
    load_matrix_csv(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("expected 3") != std::string::npos);
  }
}

TEST_CASE("non-numeric and non-finite cells are rejected") {
  TempFile a("text.csv", "1,2\nfoo,3\n");
  CHECK_THROWS_AS(load_matrix_csv(a.path), ParseError);
  TempFile b("nan.csv", "1,2\nnan,3\n");
  CHECK_THROWS_AS(load_matrix_csv(b.path), ParseError);
  TempFile c("inf.csv", "inf\n");
  CHECK_THROWS_AS(load_matrix_csv(c.path), ParseError);
  CHECK_THROWS_AS(load_matrix_csv("/tmp/does_not_exist_nfsic.csv"), ParseError);
  TempFile d("empty.csv", "\n");
  CHECK_THROWS_AS(load_matrix_csv(d.path), ParseError);
}

TEST_CASE("skip_header tolerates one header line") {
  TempFile f("header.csv", "colA,colB\n1,2\n3,4\n");
  const Matrix m = load_matrix_csv(f.path, true);
  CHECK(m.rows() == 2);
  CHECK(m(1, 1) == 4.0);
  CHECK_THROWS_AS(load_matrix_csv(f.path, false), ParseError);
}

}  // TEST_SUITE

TEST_SUITE("rng") {

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(5, 7) == derive_seed(5, 7));
}

TEST_CASE("permutation is a bijection") {
  Rng rng(9);
  const auto pi = rng.permutation(100);
  std::set<int> seen(pi.begin(), pi.end());
  CHECK(seen.size() == 100);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 99);
}

TEST_CASE("sample without replacement draws distinct indices") {
  Rng rng(10);
  const auto idx = rng.sample_without_replacement(50, 20);
  std::set<int> seen(idx.begin(), idx.end());
  CHECK(seen.size() == 20);
  for (int i : idx) {
    CHECK(i >= 0);
    CHECK(i < 50);
  }
}

TEST_CASE("normal variates have roughly standard moments") {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("uniform stays in the half-open interval") {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

}  // TEST_SUITE
