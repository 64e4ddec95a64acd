#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace jsrcert {

// Counter-based generator built on the SplitMix64 finalizer. The whole
// algorithm is pinned here so another implementation can reproduce every
// sampled artifact from the recorded seed:
//
//   mix(z)      = splitmix64 finalizer (Stafford variant 13)
//   stream(a,b) = key' = mix(mix(key ^ (a + C1)) ^ (b + C2))
//   next()      = key += GOLDEN; return mix(key)
//   uniform01() = next() >> 11, scaled by 2^-53            (in [0, 1))
//   normal()    = Box-Muller from two uniform01() draws, second value cached
//
// Derived streams are independent of how work is scheduled: sample i always
// draws from stream(tag, i), so results do not depend on the thread count.
class Rng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  explicit Rng(std::uint64_t seed) : key_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  // Independent substream addressed by (a, b); used as (tag, sample index).
  Rng stream(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t k = mix(key_ ^ (a + kGolden));
    k = mix(k ^ (b + 0xD1B54A32D192ED03ull));
    return Rng(k);
  }

  std::uint64_t next() {
    key_ += kGolden;
    return mix(key_);
  }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in {lo, ..., hi} by scaled rejection-free multiply; the
  // ranges used here (mode counts) are tiny so modulo bias is irrelevant at
  // ~2^-60, but we document it: value = lo + floor(uniform01() * span).
  int uniform_int(int lo, int hi) {
    double u = uniform01();
    int span = hi - lo + 1;
    int v = lo + static_cast<int>(u * span);
    return v > hi ? hi : v;
  }

  // Standard normal via Box-Muller; caches the sine component.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    // 1 - u1 lies in (0, 1], so the log is finite.
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double t = 2.0 * kPi * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::uint64_t key_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace jsrcert
