#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace unoma {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Pure function of (counter, key): any (seed, stream) pair addresses an
/// independent, reproducible sequence regardless of how work is scheduled.
struct Philox4x32 {
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      std::uint64_t prod0 = std::uint64_t(kMulA) * ctr[0];
      std::uint64_t prod1 = std::uint64_t(kMulB) * ctr[2];
      ctr = {std::uint32_t(prod1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(prod1),
             std::uint32_t(prod0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(prod0)};
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    return ctr;
  }
};

/// Buffered double/normal stream over Philox blocks. The counter layout is
/// (block_lo, block_hi, stream_lo, stream_hi) with key = seed, so streams are
/// fully determined by (seed, stream_id).
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_{std::uint32_t(stream_id), std::uint32_t(stream_id >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) {
      buf_ = Philox4x32::block({std::uint32_t(block_), std::uint32_t(block_ >> 32),
                                stream_[0], stream_[1]},
                               key_);
      ++block_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t lo = next_u32();
    return lo | (std::uint64_t(next_u32()) << 32);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal pair via Box-Muller (fixed two-uniform consumption).
  std::array<double, 2> next_normal_pair() {
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));  // 1-u1 in (0,1]
    double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  /// |h|^2 for h complex Gaussian with E|h|^2 = variance.
  double next_complex_gain_power(double variance) {
    auto [x, y] = next_normal_pair();
    return 0.5 * variance * (x * x + y * y);
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace unoma
