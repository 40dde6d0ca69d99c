#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dspp {

/// Philox4x32-10 counter-based generator. A stream is identified by
/// (seed, path, stream id); draws within it advance a block counter, so any
/// path can be regenerated independently of every other.
class PathRng {
 public:
  using result_type = std::uint64_t;

  PathRng(std::uint64_t seed, std::uint64_t path, std::uint32_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_(path),
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ >= 4) refill();
    const std::uint64_t hi = buffer_[used_++];
    const std::uint64_t lo = buffer_[used_++];
    return (hi << 32) | lo;
  }

  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  static void round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    constexpr std::uint64_t m0 = 0xD2511F53u;
    constexpr std::uint64_t m1 = 0xCD9E8D57u;
    const std::uint64_t p0 = m0 * c[0];
    const std::uint64_t p1 = m1 * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
  }

  void refill() {
    std::array<std::uint32_t, 4> c{block_++, stream_, static_cast<std::uint32_t>(path_),
                                   static_cast<std::uint32_t>(path_ >> 32)};
    std::array<std::uint32_t, 2> k = key_;
    for (int r = 0; r < 10; ++r) {
      round(c, k);
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    buffer_ = c;
    used_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace dspp
