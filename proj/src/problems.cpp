#include "nfsic/problems.hpp"

#include <cmath>
#include <numbers>

#include "nfsic/rng.hpp"

namespace nfsic {

namespace {

Matrix standard_normal(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace

JointSample sample_sg(int n, int dx, int dy, std::uint64_t seed) {
  if (n < 1) throw InputError("sample_sg: need n >= 1");
  if (dx < 1 || dy < 1) throw InputError("sample_sg: need dx, dy >= 1");
  Rng rng(derive_seed(seed, 0x7367ULL));
  Matrix xs = standard_normal(n, dx, rng);
  Matrix ys = standard_normal(n, dy, rng);
  return {std::move(xs), std::move(ys)};
}

JointSample sample_sin(int n, double omega, std::uint64_t seed) {
  if (n < 1) throw InputError("sample_sin: need n >= 1");
  if (!(omega > 0.0)) throw InputError("sample_sin: omega must be positive");
  constexpr double pi = std::numbers::pi;
  constexpr long kProposalCap = 1000000;  // per accepted point
  Rng rng(derive_seed(seed, 0x73696eULL));
  Matrix xs(n, 1), ys(n, 1);
  for (int i = 0; i < n; ++i) {
    long tries = 0;
    for (;;) {
      if (++tries > kProposalCap) {
        throw DegenerateInputError("sample_sin: proposal cap exceeded");
      }
      const double x = rng.uniform(-pi, pi);
      const double y = rng.uniform(-pi, pi);
      const double accept_prob = 0.5 * (1.0 + std::sin(omega * x) * std::sin(omega * y));
      if (rng.uniform() < accept_prob) {
        xs(i, 0) = x;
        ys(i, 0) = y;
        break;
      }
    }
  }
  return {std::move(xs), std::move(ys)};
}

JointSample sample_gsign(int n, int dx, std::uint64_t seed) {
  if (n < 1) throw InputError("sample_gsign: need n >= 1");
  if (dx < 1) throw InputError("sample_gsign: need dx >= 1");
  Rng rng(derive_seed(seed, 0x677369676eULL));
  Matrix xs(n, dx), ys(n, 1);
  for (int i = 0; i < n; ++i) {
    double sign = 1.0;
    for (int j = 0; j < dx; ++j) {
      const double x = rng.normal();
      xs(i, j) = x;
      sign *= (x < 0.0) ? -1.0 : 1.0;
    }
    ys(i, 0) = std::abs(rng.normal()) * sign;
  }
  return {std::move(xs), std::move(ys)};
}

JointSample sample_neg_linear(int n, double noise_sd, std::uint64_t seed) {
  if (n < 1) throw InputError("sample_neg_linear: need n >= 1");
  if (!(noise_sd >= 0.0)) throw InputError("sample_neg_linear: bad noise_sd");
  Rng rng(derive_seed(seed, 0x6e65676cULL));
  Matrix xs(n, 1), ys(n, 1);
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    xs(i, 0) = x;
    ys(i, 0) = -x + noise_sd * rng.normal();
  }
  return {std::move(xs), std::move(ys)};
}

JointSample sample_problem(const ProblemSpec& spec, int n, std::uint64_t seed) {
  switch (spec.kind) {
    case ProblemKind::sg:
      return sample_sg(n, spec.dx, spec.dy, seed);
    case ProblemKind::sin:
      return sample_sin(n, spec.omega, seed);
    case ProblemKind::gsign:
      return sample_gsign(n, spec.dx, seed);
    case ProblemKind::neg_linear:
      return sample_neg_linear(n, spec.noise_sd, seed);
  }
  throw InputError("sample_problem: unknown problem kind");
}

}  // namespace nfsic
