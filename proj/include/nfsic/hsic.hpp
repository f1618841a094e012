#pragma once

#include <cstdint>

#include "nfsic/kernels.hpp"
#include "nfsic/sample.hpp"
#include "nfsic/testing.hpp"

namespace nfsic {

// Biased plug-in HSIC estimate: (1/n^2) trace(HKH HLH) with full n x n
// kernel matrices. Quadratic time and memory.
double hsic_statistic(const JointSample& sample, const GaussianKernel& kx,
                      const GaussianKernel& ky);

// Permutation test with hsic_statistic; centered kernel matrices are
// computed once and re-read under row/column permutations.
TestOutcome hsic_test(const JointSample& sample, const GaussianKernel& kx,
                      const GaussianKernel& ky, double alpha, int num_perms,
                      std::uint64_t seed);

}  // namespace nfsic
