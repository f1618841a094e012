#pragma once

#include <cstdint>

#include "nfsic/sample.hpp"

namespace nfsic {

enum class ProblemKind { sg, sin, gsign, neg_linear };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::sg;
  int dx = 1;
  int dy = 1;
  double omega = 1.0;     // sin only
  double noise_sd = 0.3;  // neg_linear only
};

// X ~ N(0, I_dx), Y ~ N(0, I_dy), independent.
JointSample sample_sg(int n, int dx, int dy, std::uint64_t seed);

// Exact rejection sampler for p(x, y) proportional to
// 1 + sin(omega x) sin(omega y) on (-pi, pi)^2.
JointSample sample_sin(int n, double omega, std::uint64_t seed);

// X ~ N(0, I_dx), Y = |Z| prod_i sgn(X_i) with Z ~ N(0, 1).
JointSample sample_gsign(int n, int dx, std::uint64_t seed);

// X ~ N(0, 1), Y = -X + noise_sd * N(0, 1).
JointSample sample_neg_linear(int n, double noise_sd, std::uint64_t seed);

JointSample sample_problem(const ProblemSpec& spec, int n, std::uint64_t seed);

}  // namespace nfsic
