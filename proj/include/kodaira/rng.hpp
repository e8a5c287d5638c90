// Counter-based splittable random number generator (Philox4x32-10).
//
// Streams are identified by a 64-bit master seed plus a path of derivation
// words (experiment id, p, sample index, ...).  Draws within a stream are
// pure functions of (key, counter), so results do not depend on how work is
// scheduled across threads.

#ifndef KODAIRA_RNG_HPP
#define KODAIRA_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace kodaira {

inline constexpr const char* kRngAlgorithm = "philox4x32-10";

namespace detail {

inline void philox_round(std::array<uint32_t, 4>& ctr, std::array<uint32_t, 2>& key) {
  constexpr uint64_t kMul0 = 0xD2511F53ull;
  constexpr uint64_t kMul1 = 0xCD9E8D57ull;
  const uint64_t p0 = kMul0 * ctr[0];
  const uint64_t p1 = kMul1 * ctr[2];
  const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  key[0] += 0x9E3779B9u;  // golden ratio
  key[1] += 0xBB67AE85u;  // sqrt(3)-1
}

inline std::array<uint32_t, 4> philox10(std::array<uint32_t, 4> ctr,
                                        std::array<uint32_t, 2> key) {
  for (int i = 0; i < 10; ++i) philox_round(ctr, key);
  return ctr;
}

inline uint64_t fnv1a64(uint64_t h, uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xFFu;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace detail

/// One independent stream of the counter-based generator.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t path_hash = 0xcbf29ce484222325ull)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        path_(path_hash), counter_(0), cache_pos_(4) {}

  /// Child stream derived from this one by an index (splittable, collision-free
  /// for distinct derivation paths).
  RngStream derive(uint64_t index) const {
    RngStream child(static_cast<uint64_t>(key_[0]) | (static_cast<uint64_t>(key_[1]) << 32),
                    detail::fnv1a64(path_, index + 1));
    return child;
  }

  uint32_t next_u32() {
    if (cache_pos_ == 4) refill();
    return cache_[cache_pos_++];
  }

  /// Uniform double in (0,1) with 53 random bits, never exactly 0 or 1.
  double next_double() {
    const uint64_t hi = next_u32(), lo = next_u32();
    const uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard complex Gaussian, E|xi|^2 = 1.
  std::complex<double> next_complex_gaussian() {
    const double u = next_double();
    const double v = next_double();
    const double rad = std::sqrt(-std::log(u));
    return {rad * std::cos(2.0 * M_PI * v), rad * std::sin(2.0 * M_PI * v)};
  }

  /// Real standard normal (variance 1).
  double next_normal() {
    const double u = next_double();
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

 private:
  void refill() {
    const std::array<uint32_t, 4> ctr = {
        static_cast<uint32_t>(counter_), static_cast<uint32_t>(counter_ >> 32),
        static_cast<uint32_t>(path_), static_cast<uint32_t>(path_ >> 32)};
    cache_ = detail::philox10(ctr, key_);
    ++counter_;
    cache_pos_ = 0;
  }

  std::array<uint32_t, 2> key_;
  uint64_t path_;
  uint64_t counter_;
  std::array<uint32_t, 4> cache_;
  int cache_pos_;
};

/// Stream for a named experiment: path = fnv(experiment name).
inline RngStream experiment_stream(uint64_t seed, std::string_view experiment) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : experiment) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return RngStream(seed, h);
}

}  // namespace kodaira

#endif
