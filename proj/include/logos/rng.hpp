#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace logos {

// Deterministic, portable randomness. std::mt19937_64 output is fully
// specified by the standard; the transforms below replace std::
// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double normal();

  // Index sampled proportionally to `weights` (non-negative, any positive
  // sum) by CDF inversion.
  std::size_t sample_discrete(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Statelessly derives an independent stream seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace logos
