#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace amr {

// Seeded generator whose draws are identical on every platform: the engine
// sequence is fixed by the standard and bounded draws avoid the
// implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform in [0, 1).
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t Fnv1a64(std::string_view bytes);

// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

}  // namespace amr
