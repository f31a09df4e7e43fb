#pragma once

#include <cmath>
#include <cstdint>

namespace polywalk {

// PCG XSL-RR 128/64. A 128-bit LCG state with a 64-bit xorshift-rotate
// output. Distinct odd increments select independent streams, which is how
// batch restarts, rounding iterations and retry attempts each get their own
// substream from one root seed.
class Pcg64 {
 public:
  Pcg64() : Pcg64(0x853c49e6748fea9bULL) {}

  explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    const u128 init_state =
        (u128(splitmix(seed)) << 64) | splitmix(seed + 0x9e3779b97f4a7c15ULL);
    state_ = 0;
    inc_ = (u128(stream) << 1) | 1u;
    next_u64();
    state_ += init_state;
    next_u64();
  }

  // Child generator: same seed material, derived stream id. Children of
  // distinct parents or distinct indices never collide in practice.
  Pcg64 substream(std::uint64_t k) const {
    return Pcg64(seed_, splitmix(stream_ ^ (0x9e3779b97f4a7c15ULL * (k + 1))));
  }

  std::uint64_t next_u64() {
    state_ = state_ * kMultiplier + inc_;
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  // 53-bit uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Marsaglia polar method, one spare cached between calls.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  using u128 = unsigned __int128;
  static constexpr u128 kMultiplier =
      (u128(2549297995355413924ULL) << 64) | 4865540595714422341ULL;

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  u128 state_ = 0;
  u128 inc_ = 1;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polywalk
