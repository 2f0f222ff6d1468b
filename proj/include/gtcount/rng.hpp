#pragma once

#include <cstdint>

namespace gtcount {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer; full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Maps a uniform 64-bit word onto [0, bound). Multiply-shift; the bias is
// below bound/2^64 and irrelevant at the bounds used here.
constexpr std::uint64_t bounded(std::uint64_t word, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(word) * bound) >> 64);
}

// Names one reproducible pseudo-random stream. Equal (master, stream) pairs
// always produce identical draws, independent of platform or thread schedule.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;
};

// A node in a splittable tree of random streams. child(i) derives an
// independent subtree; bits(c) is random access to the c-th word of this
// node's own stream (the words of a splitmix64 sequence seeded at state()).
class RandomKey {
 public:
  explicit constexpr RandomKey(std::uint64_t state) : state_(state) {}

  constexpr RandomKey child(std::uint64_t index) const {
    return RandomKey(mix64((state_ + golden_gamma * index) ^ 0xBEA225F9EB34556Dull));
  }
  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(state_ + golden_gamma * (counter + 1));
  }
  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

constexpr RandomKey key_of(Seed seed) {
  return RandomKey(
      mix64(mix64(seed.master ^ 0x6A09E667F3BCC909ull) + golden_gamma * seed.stream));
}

// Sequential splitmix64 generator over a key's stream.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(RandomKey key) : state_(key.state()) {}

  constexpr std::uint64_t next() { return mix64(state_ += golden_gamma); }
  constexpr std::uint64_t below(std::uint64_t bound) { return bounded(next(), bound); }

 private:
  std::uint64_t state_;
};

}  // namespace gtcount
