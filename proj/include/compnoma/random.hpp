#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace compnoma {

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream key from a master seed and a path of
// counters, e.g. (seed, purpose, trial). Order of the path matters.
inline std::uint64_t derive_key(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t key = mix64(master ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t p : path) key = mix64(key ^ mix64(p + 0x9e3779b97f4a7c15ULL));
  return key;
}

// Stream purposes, so topology and fading draws never share a key.
enum class StreamTag : std::uint64_t { topology = 1, fading = 2 };

// Counter-based generator: the n-th output is mix64(key + (n+1) * golden).
// Each trial owns one of these, so results do not depend on scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

}  // namespace compnoma
