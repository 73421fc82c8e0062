#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace coldstandby {

/// Random stream keyed by (seed, stream, chunk).
///
/// Every chunk of a Monte Carlo run owns one of these, so the draws that land
/// in a chunk never depend on how chunks are scheduled across threads.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64 seeded by std::seed_seq(seed_lo, seed_hi, stream_lo, stream_hi, chunk_lo, chunk_hi)";

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t chunk = 0);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace coldstandby
