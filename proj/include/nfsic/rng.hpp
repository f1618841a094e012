#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nfsic {

// splitmix64 mixing step; used to derive independent sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t state);

// Deterministic seed for a sub-stream identified by up to two indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

// Seeded generator with explicit variate recipes, so that results are
// reproducible for a fixed seed independent of the standard library's
// distribution implementations. Normals use the Marsaglia polar method.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); rejection on the top bits, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t n);

  double normal();

  // Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<int> permutation(int n);

  // k distinct indices from {0, ..., n-1}, in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nfsic
