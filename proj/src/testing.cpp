#include "nfsic/testing.hpp"

#include <algorithm>
#include <cmath>

#include "nfsic/chi2.hpp"
#include "nfsic/parallel.hpp"
#include "nfsic/rng.hpp"

namespace nfsic {

TestOutcome test_chi2(const NfsicState& state, int J, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("test_chi2: alpha must be in (0, 1)");
  }
  TestOutcome out;
  out.statistic = state.lambda_hat;
  out.threshold = chi2_quantile(J, 1.0 - alpha);
  out.p_value = chi2_sf(J, state.lambda_hat);
  out.reject = out.statistic >= out.threshold;
  out.method = ThresholdMethod::chi2;
  out.alpha = alpha;
  return out;
}

double empirical_threshold(std::vector<double> values, double alpha) {
  if (values.empty()) throw InputError("empirical_threshold: no values");
  std::sort(values.begin(), values.end());
  const auto m = values.size();
  auto idx = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(m)));
  idx = std::clamp<std::size_t>(idx, 1, m);
  return values[idx - 1];
}

TestOutcome test_permutation(const JointSample& sample,
                             const GaussianKernel& kx, const GaussianKernel& ky,
                             const TestLocations& locs, double gamma,
                             double alpha, int num_perms, std::uint64_t seed) {
  if (num_perms < 1) throw InputError("test_permutation: num_perms must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("test_permutation: alpha must be in (0, 1)");
  }
  const auto [K, L] = compute_kl(sample, kx, ky, locs);
  const NfsicState observed = nfsic_from_kl(K, L, gamma);

  const int n = sample.n();
  std::vector<double> perm_stats(static_cast<std::size_t>(num_perms));
  parallel_for(num_perms, [&](int p) {
    Rng rng(derive_seed(seed, 0x7065726dULL, static_cast<std::uint64_t>(p)));
    const auto pi = rng.permutation(n);
    Matrix lp(L.rows(), L.cols());
    for (int j = 0; j < n; ++j) lp.col(j) = L.col(pi[j]);
    perm_stats[static_cast<std::size_t>(p)] =
        nfsic_from_kl(K, lp, gamma).lambda_hat;
  });

  int count_ge = 0;
  for (double s : perm_stats) {
    if (s >= observed.lambda_hat) ++count_ge;
  }

  TestOutcome out;
  out.statistic = observed.lambda_hat;
  out.threshold = empirical_threshold(perm_stats, alpha);
  out.p_value = (1.0 + count_ge) / (1.0 + num_perms);
  out.reject = out.statistic >= out.threshold;
  out.method = ThresholdMethod::permutation;
  out.alpha = alpha;
  return out;
}

}  // namespace nfsic
