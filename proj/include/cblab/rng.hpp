#pragma once

#include <cstdint>
#include <stdexcept>

namespace cblab {

/// SplitMix64 stream. Used everywhere a seed must reproduce the same
/// instance on every platform, so no <random> distributions are involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi], by rejection.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool coin() { return (next() >> 63) != 0; }

  /// Derives an independent child stream, e.g. one per instance id.
  Rng fork(std::uint64_t salt) {
    Rng child(state_ ^ (salt * 0xd1b54a32d192ed03ULL));
    child.next();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cblab
