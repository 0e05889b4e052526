#pragma once

// Counter-keyed random streams.
//
// Every random decision in the library is drawn from a Stream whose state is a
// pure function of (master seed, trial index, tag). Nothing depends on thread
// schedule or on how many draws another stream consumed.

#include <cstdint>
#include <limits>

namespace lrp {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive mix of three words; used for stream keys and pair hashes.
inline constexpr std::uint64_t mix3(std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) noexcept {
  std::uint64_t h = splitmix64(a ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ (c + 0x3c6ef372fe94f82bULL));
  return h;
}

/// Maps 64 random bits to a double in [0, 1) with 53 bits of resolution.
inline constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sub-stream tags. Values are part of the reproducibility contract.
enum class StreamTag : std::uint64_t {
  Edges = 1,
  ResistancePairs = 2,
  Generic = 3,
  Test = 0xfeed,
};

/// xoshiro256** seeded through splitmix64. Satisfies
/// UniformRandomBitGenerator so it can feed <random> adaptors in tests, but the
/// library itself only uses uniform() and below() to stay platform-exact.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept {
    std::uint64_t x = key;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = splitmix64(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's nearly-divisionless).
  std::uint64_t below(std::uint64_t bound) noexcept {
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4]{};
};

inline Stream derive_stream(std::uint64_t master_seed, std::uint64_t trial,
                            StreamTag tag) noexcept {
  return Stream(mix3(master_seed, trial, static_cast<std::uint64_t>(tag)));
}

/// Per-pair uniform used by the coupled sampler: U(x,y) = U(y,x), no state.
inline double pair_uniform(std::uint64_t key, std::uint64_t x,
                           std::uint64_t y) noexcept {
  if (x > y) {
    const auto t = x;
    x = y;
    y = t;
  }
  return to_unit(mix3(key, x, y));
}

}  // namespace lrp
