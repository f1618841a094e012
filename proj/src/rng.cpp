#include "nfsic/rng.hpp"

#include <cmath>

#include "nfsic/common.hpp"

namespace nfsic {

std::uint64_t mix_seed(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a) {
  return mix_seed(mix_seed(master) ^ mix_seed(a + 0x2545f4914f6cdd1dULL));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b + 0x6a09e667f3bcc909ULL);
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw InputError("uniform_int: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k > n) throw InputError("sample_without_replacement: k > n");
  // Partial Fisher-Yates on an index array.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) {
    const int j =
        i + static_cast<int>(uniform_int(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
    out[i] = idx[i];
  }
  return out;
}

}  // namespace nfsic
