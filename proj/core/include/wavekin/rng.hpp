#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace wavekin {

/// Philox4x32-10 keyed counter block cipher (Salmon et al., SC'11 keystream
/// generator). Stateless: every 128-bit block is a pure function of
/// (counter, key), which is what makes draws addressable by
/// (seed, member, mode, draw) and reproducible under any parallel schedule.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

/// Uniform double in [0,1) from 64 random bits (53-bit mantissa).
inline double u64_to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based random stream addressed by (seed, member, mode).
/// Consecutive draws advance the block counter; one block yields two doubles.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t member, std::uint32_t mode)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        member_lo_(static_cast<std::uint32_t>(member)),
        member_hi_(static_cast<std::uint32_t>(member >> 32)),
        mode_(mode) {}

  double uniform() {
    if (have_ == 0) refill();
    --have_;
    const std::uint64_t bits = have_ == 1
        ? (static_cast<std::uint64_t>(buf_[1]) << 32) | buf_[0]
        : (static_cast<std::uint64_t>(buf_[3]) << 32) | buf_[2];
    return u64_to_unit_double(bits);
  }

  /// Angle uniform on [0, 2*pi).
  double angle() { return 2.0 * M_PI * uniform(); }

  /// Exponential with the given mean (inverse CDF; finite for u in [0,1)).
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

 private:
  void refill() {
    buf_ = Philox4x32::block({member_lo_, member_hi_, mode_, block_}, key_);
    ++block_;
    have_ = 2;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t member_lo_, member_hi_, mode_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

}  // namespace wavekin
