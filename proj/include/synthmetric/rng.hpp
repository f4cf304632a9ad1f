#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <type_traits>

namespace synthmetric {

struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

inline constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t mix(std::uint64_t state, std::uint64_t part) {
  std::uint64_t s = state ^ (part + 0x632be59bd9b4e019ULL + (state << 6) + (state >> 2));
  return splitmix64(s);
}

template <typename T>
constexpr std::uint64_t part_hash(const T& part) {
  if constexpr (std::is_integral_v<T>) {
    return static_cast<std::uint64_t>(part) * 0xff51afd7ed558ccdULL + 1;
  } else {
    return fnv1a(std::string_view(part));
  }
}

}  // namespace detail

// Child seed for a (base, part...) tuple, e.g. derive_seed(run, "dataset", id, "fold", 3).
// Streams derived from distinct tuples are independent of each other and of call order.
template <typename... Parts>
constexpr RngSeed derive_seed(RngSeed base, const Parts&... parts) {
  std::uint64_t h = base.value;
  ((h = detail::mix(h, detail::part_hash(parts))), ...);
  return RngSeed{h};
}

// xoshiro256** seeded through SplitMix64. Every draw is defined here rather than via
// <random> distributions so sample streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(RngSeed seed) {
    std::uint64_t sm = seed.value;
    for (auto& word : state_) word = splitmix64(sm);
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

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1], safe for log().
  double uniform_open0() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open0();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double exponential() { return -std::log(uniform_open0()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4]{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace synthmetric
