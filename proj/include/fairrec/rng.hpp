#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

// Platform-stable randomness. Every random choice in the project (orderings,
// random/mixed baselines, synthetic noise, tie-breaking) flows through these
// generators so that a given seed produces identical bytes on any platform.
// Standard-library distributions are avoided on purpose: their outputs are
// implementation-defined.

namespace fairrec {

// splitmix64, used for seeding and stream derivation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** by Blackman and Vigna; state seeded via splitmix64.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Independent stream families derived from one root seed.
enum class StreamPurpose : std::uint64_t {
  kOrdering = 1,
  kTieBreak = 2,
  kRandomK = 3,
  kMixedK = 4,
  kSyntheticNoise = 5,
};

inline std::uint64_t derive_seed(std::uint64_t root, StreamPurpose purpose,
                                 std::uint64_t index = 0) {
  SplitMix64 sm(root);
  std::uint64_t h = sm.next() ^ (static_cast<std::uint64_t>(purpose) *
                                 0xbf58476d1ce4e5b9ULL);
  SplitMix64 sm2(h + index * 0x94d049bb133111ebULL);
  return sm2.next();
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_.next(); }

  // Unbiased integer in [0, bound) via rejection sampling; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_.next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_.next() >> 11) * 0x1.0p-53; }

  // Uniform double in [-1, 1).
  double symmetric_unit() { return 2.0 * unit() - 1.0; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Uniform k-subset of [0, n), returned sorted ascending. Requires k <= n.
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n,
                                                        std::uint32_t k) {
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::uint32_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::uint32_t>(below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  Xoshiro256StarStar engine_;
};

}  // namespace fairrec
