#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

namespace promor {

// Deterministic splitmix64 generator. Standard-library engines are portable
// but the distributions are not, so every random draw in the library goes
// through this class to keep outputs byte-identical for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n), n > 0 (rejection on the partial bucket).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x, r;
    do {
      x = next_u64();
      r = x % n;
    } while (x - r > std::uint64_t(0) - n);
    return r;
  }

  // Uniform double in [0, 1), 53 bits.
  double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as a log() argument.
  double real_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (one value per call; no cached spare,
  // so the draw sequence is a pure function of the call count).
  double gaussian() {
    double u1 = real_open();
    double u2 = real();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      std::size_t j = i + static_cast<std::size_t>(below(v.size() - i));
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// FNV-1a 64-bit, used for seed derivation labels and input-file hashing.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// All randomness flows from one root seed; each consumer derives its own
// stream with a fixed label so adding a consumer never shifts another's draws.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
  Rng mix(root ^ fnv1a64(label));
  mix.next_u64();
  return mix.next_u64();
}

// Fisher-Yates selection of n out of population indices [0, population).
// Returned indices are sorted ascending so that downstream consumers keep
// the original record order.
inline std::vector<std::size_t> sample_indices(std::size_t population,
                                               std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n && i + 1 < population; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace promor
