#pragma once

#include <cmath>
#include <cstdint>

namespace semistable {

// splitmix64: tiny, platform-stable generator.  All Monte Carlo in this
// library draws from per-replication substreams derived from (seed, index),
// so results are byte-identical regardless of scheduling or thread count.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on {k * 2^-53 : 0 <= k < 2^53}.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDull;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ull;
  z ^= z >> 33;
  return z;
}

// Counter-based substream: replication r of run `seed` always sees the same
// digits, independent of how replications are partitioned across threads.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed + 0x9E3779B97F4A7C15ull * (index + 1)));
}

// Bernoulli(q) digit stream.  When q*256 is an integer (q = 1/4, 1/2, 3/4,
// ...), eight digits are decided per generator call with exactly the right
// probability; otherwise one 53-bit uniform per digit.  Both paths are exact
// in distribution; a given q always selects the same path, so streams are
// reproducible.
class DigitSource {
 public:
  DigitSource(SplitMix64 rng, double q) : rng_(rng), q_(q) {
    const double t = q * 256.0;
    if (t == std::floor(t) && t >= 1.0 && t <= 255.0)
      threshold8_ = static_cast<std::uint32_t>(t);
  }

  // 1 with probability q, 0 otherwise.
  int next_digit() {
    if (threshold8_ != 0) {
      if (bits_left_ == 0) {
        buffer_ = rng_.next();
        bits_left_ = 8;
      }
      const std::uint32_t byte = static_cast<std::uint32_t>(buffer_ & 0xFF);
      buffer_ >>= 8;
      --bits_left_;
      return byte < threshold8_ ? 1 : 0;
    }
    return rng_.next_double() < q_ ? 1 : 0;
  }

 private:
  SplitMix64 rng_;
  double q_;
  std::uint32_t threshold8_ = 0;
  std::uint64_t buffer_ = 0;
  int bits_left_ = 0;
};

}  // namespace semistable
