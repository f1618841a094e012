#include "nfsic/hsic.hpp"

#include <algorithm>
#include <vector>

#include "nfsic/parallel.hpp"
#include "nfsic/rng.hpp"

namespace nfsic {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Full n x n Gaussian kernel matrix over the rows of pts.
RowMatrix gram(const Matrix& pts, double width_sq) {
  const Vector sq = pts.rowwise().squaredNorm();
  Matrix d2 = -2.0 * pts * pts.transpose();
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  return (d2.array().max(0.0) * (-0.5 / width_sq)).exp().matrix();
}

// Doubly centered: H M H with H = I - 11'/n.
RowMatrix center(RowMatrix m) {
  const Vector row_mean = m.rowwise().mean();
  m.colwise() -= row_mean;
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  m.rowwise() -= col_mean;
  return m;
}

double center_dot(const RowMatrix& kc, const RowMatrix& lc) {
  return (kc.array() * lc.array()).sum();
}

}  // namespace

double hsic_statistic(const JointSample& sample, const GaussianKernel& kx,
                      const GaussianKernel& ky) {
  const int n = sample.n();
  if (n < 4) throw InputError("hsic_statistic: need n >= 4");
  const RowMatrix kc = center(gram(sample.xs, kx.width_sq));
  const RowMatrix lc = center(gram(sample.ys, ky.width_sq));
  const double nd = static_cast<double>(n);
  return center_dot(kc, lc) / (nd * nd);
}

TestOutcome hsic_test(const JointSample& sample, const GaussianKernel& kx,
                      const GaussianKernel& ky, double alpha, int num_perms,
                      std::uint64_t seed) {
  if (num_perms < 1) throw InputError("hsic_test: num_perms must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("hsic_test: alpha must be in (0, 1)");
  }
  const int n = sample.n();
  if (n < 4) throw InputError("hsic_test: need n >= 4");
  const double nd = static_cast<double>(n);

  const RowMatrix kc = center(gram(sample.xs, kx.width_sq));
  const RowMatrix lc = center(gram(sample.ys, ky.width_sq));
  const double observed = center_dot(kc, lc) / (nd * nd);

  // Permuting y rows maps lc to lc[pi, pi] (centering commutes with row
  // permutations), so the centered matrices are computed once.
  std::vector<double> perm_stats(static_cast<std::size_t>(num_perms));
  parallel_for(num_perms, [&](int p) {
    Rng rng(derive_seed(seed, 0x68736963ULL, static_cast<std::uint64_t>(p)));
    const auto pi = rng.permutation(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* krow = kc.row(i).data();
      const double* lrow = lc.row(pi[i]).data();
      double row_acc = 0.0;
      for (int j = 0; j < n; ++j) row_acc += krow[j] * lrow[pi[j]];
      acc += row_acc;
    }
    perm_stats[static_cast<std::size_t>(p)] = acc / (nd * nd);
  });

  int count_ge = 0;
  for (double s : perm_stats) {
    if (s >= observed) ++count_ge;
  }

  TestOutcome out;
  out.statistic = observed;
  out.threshold = empirical_threshold(perm_stats, alpha);
  out.p_value = (1.0 + count_ge) / (1.0 + num_perms);
  out.reject = out.statistic >= out.threshold;
  out.method = ThresholdMethod::permutation;
  out.alpha = alpha;
  return out;
}

}  // namespace nfsic
