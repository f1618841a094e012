#pragma once

#include <cstdint>

#include "nfsic/common.hpp"

namespace nfsic {

// Isotropic Gaussian kernel k(x, v) = exp(-||x - v||^2 / (2 width_sq)).
struct GaussianKernel {
  double width_sq;

  explicit GaussianKernel(double width_sq_in);
};

double eval(const GaussianKernel& kernel, const Eigen::Ref<const Vector>& x,
            const Eigen::Ref<const Vector>& v);

// Median of all pairwise Euclidean distances. For row counts above
// subsample_cap the median is computed on a seeded uniform subsample of
// subsample_cap rows, keeping the cost bounded at desk scale.
double median_heuristic(const Eigen::Ref<const Matrix>& points,
                        int subsample_cap = 5000, std::uint64_t seed = 0);

// Kernel with width_sq set to the squared median pairwise distance.
GaussianKernel median_heuristic_kernel(const Eigen::Ref<const Matrix>& points,
                                       int subsample_cap = 5000,
                                       std::uint64_t seed = 0);

}  // namespace nfsic
