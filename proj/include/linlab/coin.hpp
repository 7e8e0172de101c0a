#pragma once

#include <cstdint>

namespace linlab {

// SplitMix64 step: advances the state and returns a mixed 64-bit output.
// Fixed here so runs reproduce bit-for-bit on every platform.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic stream of fair coin bits. Outcome i is a function of
// (seed, i) only; the cursor just tracks how many flips have executed.
class CoinStream {
 public:
  explicit CoinStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

  int next() {
    ++cursor_;
    return static_cast<int>(splitmix64(state_) & 1u);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t cursor() const { return cursor_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  std::uint64_t cursor_ = 0;
};

// Small deterministic generator for schedule choices and workload shapes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x5851f42d4c957f2dULL) {}

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform in [0, n). n must be positive; bias is negligible for our n.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

 private:
  std::uint64_t state_;
};

}  // namespace linlab
