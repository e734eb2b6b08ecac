#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace itoquad {

/// Seeded, splittable random stream.
///
/// PCG XSL-RR with 128-bit state.  The (seed, stream_id) pair selects an
/// independent sequence: the harness gives every Monte Carlo sample its own
/// stream, so serial and parallel runs draw identical numbers per sample.
/// Identical (seed, stream_id) reproduces the sequence bit for bit.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
    // Mix both words through splitmix64 chains so that neighbouring seeds
    // or stream ids land far apart in state space.
    std::uint64_t x = seed;
    const std::uint64_t h0 = mix64(x);
    const std::uint64_t h1 = mix64(x);
    std::uint64_t y = stream_id ^ h1;
    const std::uint64_t i0 = mix64(y);
    const std::uint64_t i1 = mix64(y);
    std::uint64_t z = h0 ^ i1;
    const std::uint64_t s0 = mix64(z);
    const std::uint64_t s1 = mix64(z);

    inc_ = (((u128)i0 << 64) | i1) | 1u;  // odd increment selects the stream
    state_ = 0;
    step();
    state_ += ((u128)s0 << 64) | s1;
    step();
  }

  std::uint64_t next_u64() {
    const u128 old = state_;
    step();
    const std::uint64_t xored = (std::uint64_t)(old >> 64) ^ (std::uint64_t)old;
    const unsigned rot = (unsigned)(old >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() { return (double)(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; never returns 0, safe under log().
  double uniform_pos() { return (double)((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// One standard normal draw (Box-Muller, second variate cached).
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  using u128 = unsigned __int128;

  void step() { state_ = state_ * kMult + inc_; }

  static std::uint64_t mix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr u128 kMult =
      ((u128)2549297995355413924ULL << 64) | 4865540595714422341ULL;

  u128 state_ = 0;
  u128 inc_ = 1;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline double standard_normal(RngStream& rng) { return rng.standard_normal(); }

/// Exponential draw with P(Z > x) = exp(-a x), via inverse transform.
inline double sample_exponential(double a, RngStream& rng) {
  if (!(a > 0.0)) throw std::invalid_argument("sample_exponential: rate must be > 0");
  return -std::log(rng.uniform_pos()) / a;
}

}  // namespace itoquad
