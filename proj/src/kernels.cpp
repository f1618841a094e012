#include "nfsic/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nfsic/rng.hpp"

namespace nfsic {

GaussianKernel::GaussianKernel(double width_sq_in) : width_sq(width_sq_in) {
  if (!(width_sq > 0.0) || !std::isfinite(width_sq)) {
    throw InputError("GaussianKernel: width_sq must be positive, got " +
                     std::to_string(width_sq_in));
  }
}

double eval(const GaussianKernel& kernel, const Eigen::Ref<const Vector>& x,
            const Eigen::Ref<const Vector>& v) {
  if (x.size() != v.size()) {
    throw InputError("eval: dimension mismatch, " + std::to_string(x.size()) +
                     " vs " + std::to_string(v.size()));
  }
  return std::exp(-(x - v).squaredNorm() / (2.0 * kernel.width_sq));
}

double median_heuristic(const Eigen::Ref<const Matrix>& points,
                        int subsample_cap, std::uint64_t seed) {
  const int n_full = static_cast<int>(points.rows());
  if (n_full < 2) throw InputError("median_heuristic: need at least 2 points");

  Matrix sub;
  if (subsample_cap > 1 && n_full > subsample_cap) {
    Rng rng(derive_seed(seed, 0x6d656469616eULL));
    const auto rows = rng.sample_without_replacement(n_full, subsample_cap);
    sub.resize(subsample_cap, points.cols());
    for (int i = 0; i < subsample_cap; ++i) sub.row(i) = points.row(rows[i]);
  } else {
    sub = points;
  }
  const int n = static_cast<int>(sub.rows());
  const int dim = static_cast<int>(sub.cols());

  // Points as contiguous columns; the median is selected on squared
  // distances (sqrt is monotone) so only the central values need a root.
  const Matrix pts_t = sub.transpose();
  const double* data = pts_t.data();
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    const double* pi = data + static_cast<std::ptrdiff_t>(i) * dim;
    for (int j = i + 1; j < n; ++j) {
      const double* pj = data + static_cast<std::ptrdiff_t>(j) * dim;
      double acc = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double diff = pi[d] - pj[d];
        acc += diff * diff;
      }
      d2.push_back(acc);
    }
  }

  const std::size_t m = d2.size();
  const std::size_t hi = m / 2;
  std::nth_element(d2.begin(), d2.begin() + hi, d2.end());
  double med = std::sqrt(d2[hi]);
  if (m % 2 == 0) {
    // Mean of the two central order statistics; the lower one is the max
    // of the left partition after nth_element.
    const double lo = *std::max_element(d2.begin(), d2.begin() + hi);
    med = 0.5 * (std::sqrt(lo) + med);
  }
  if (!(med > 0.0)) {
    throw DegenerateInputError(
        "median_heuristic: median pairwise distance is zero");
  }
  return med;
}

GaussianKernel median_heuristic_kernel(const Eigen::Ref<const Matrix>& points,
                                       int subsample_cap, std::uint64_t seed) {
  const double med = median_heuristic(points, subsample_cap, seed);
  return GaussianKernel(med * med);
}

}  // namespace nfsic
