#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nfsic/sample.hpp"
#include "nfsic/statistic.hpp"

namespace nfsic {

enum class ThresholdMethod { chi2, permutation };

// Parameters selected by the tuning stage, echoed in the outcome.
struct TunedReport {
  double sigma2_x;
  double sigma2_y;
  TestLocations locations;
};

struct TestOutcome {
  double statistic;
  double threshold;
  double p_value;
  bool reject;  // statistic >= threshold
  ThresholdMethod method;
  double alpha;
  std::optional<TunedReport> tuned;
};

// Decision from the asymptotic chi2(J) null.
TestOutcome test_chi2(const NfsicState& state, int J, double alpha);

// Order statistic at 1-based index ceil((1 - alpha) * m) of the sorted
// values; the empirical (1 - alpha)-quantile convention used for
// permutation thresholds.
double empirical_threshold(std::vector<double> values, double alpha);

// Permutation null: x rows held fixed, y rows permuted. The K matrix is
// reused across permutations; only L-dependent terms are recomputed.
// Permutation p draws from an independent stream derived from (seed, p).
// p-value uses the add-one convention (1 + #{perm >= obs}) / (1 + num_perms).
TestOutcome test_permutation(const JointSample& sample,
                             const GaussianKernel& kx, const GaussianKernel& ky,
                             const TestLocations& locs, double gamma,
                             double alpha, int num_perms, std::uint64_t seed);

}  // namespace nfsic
