#ifndef OED_RNG_HPP
#define OED_RNG_HPP

#include <cmath>
#include <cstdint>

#include "oed/types.hpp"

namespace oed {

/// Counter-keyed random stream. Streams are derived from a key, not from the
/// evolving generator state, so child(i) is the same stream no matter how many
/// draws the parent has produced. That makes sample n of a Monte Carlo loop
/// bit-reproducible regardless of worker count or evaluation order.
///
/// Generator: xoshiro256++ seeded from the key via splitmix64.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key = 0) : key_(key) {
    std::uint64_t s = key;
    for (auto& w : state_) w = splitmix64(s);
  }

  /// Independent stream addressed by (this stream's key, salt).
  RngStream child(std::uint64_t salt) const {
    std::uint64_t s = key_ ^ (0x9e3779b97f4a7c15ULL + salt);
    return RngStream(splitmix64(s) ^ (salt * 0xbf58476d1ce4e5b9ULL + 1));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on (0, 1): 53-bit mantissa, zero excluded so log() is safe.
  double uniform01() {
    std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (two uniforms per draw, no spare cached).
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vector normal_vector(Eigen::Index n) {
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t key_;
  std::uint64_t state_[4];
};

/// Stream tags so every module derives from a distinct subspace of the seed.
namespace rng_tag {
inline constexpr std::uint64_t outer_sample = 0x0ed0'0001;  // estimator outer loop
inline constexpr std::uint64_t optimizer_iter = 0x0ed0'0002;
inline constexpr std::uint64_t gradient_batch = 0x0ed0'0003;
inline constexpr std::uint64_t replication = 0x0ed0'0004;
inline constexpr std::uint64_t inner_dlmc = 0x0ed0'0011;
inline constexpr std::uint64_t inner_dlmcis = 0x0ed0'0012;
inline constexpr std::uint64_t data_noise = 0x0ed0'0013;
}  // namespace rng_tag

}  // namespace oed

#endif  // OED_RNG_HPP
