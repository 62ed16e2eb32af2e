#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace symdyn {

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

/// Per-stage seed: splitmix64(seed ^ fnv1a64(stage)). Every pipeline stage
/// draws from its own stream so adding a stage never shifts another's draws.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

/// Thin wrapper over mt19937_64. Distributions are implemented here rather
/// than through <random>'s distribution classes, whose output is not pinned
/// by the standard and differs between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Index i with probability w[i] / sum(w).
  int categorical(const std::vector<double>& w);

 private:
  std::mt19937_64 eng_;
};

}  // namespace symdyn
