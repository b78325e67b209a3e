#pragma once

#include <array>
#include <cstdint>

namespace bellvol {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// This is the fixed random-number contract of the Monte Carlo engine,
/// identified as kRngName. Seeded estimates are reproducible bit for bit
/// across platforms and worker counts; changing anything here is a breaking
/// change.
///
/// A stream is (seed, substream). The 128-bit counter is laid out as
/// {block lo, block hi, substream lo, substream hi} and the 64-bit key is the
/// seed. Each block yields two doubles in [0, 1) built from 53 bits.
class PhiloxStream {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr const char* kRngName = "philox4x32-10/v1";

  PhiloxStream(std::uint64_t seed, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        substream_(substream) {}

  static Block philox(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  /// Uniform double in [0, 1).
  double uniform() {
    if (buffered_ == 0) refill();
    --buffered_;
    return cache_[buffered_];
  }

  std::uint64_t blocks_used() const { return block_; }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57;
  static constexpr std::uint32_t kW0 = 0x9E3779B9;
  static constexpr std::uint32_t kW1 = 0xBB67AE85;

  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  void refill() {
    const Block out = philox({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(substream_),
                              static_cast<std::uint32_t>(substream_ >> 32)},
                             key_);
    ++block_;
    // consumed back to front: first draw is words 0-1
    cache_[1] = to_unit(out[0], out[1]);
    cache_[0] = to_unit(out[2], out[3]);
    buffered_ = 2;
  }

  Key key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<double, 2> cache_{};
  int buffered_ = 0;
};

}  // namespace bellvol
