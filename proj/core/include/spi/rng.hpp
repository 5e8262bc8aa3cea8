#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace spi {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Maps a 128-bit counter and 64-bit key to 128 random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

enum class Purpose : std::uint32_t {
  Pattern = 1,  // gaussian aperture coefficients
  PatternBits = 2,  // binary aperture coefficients
  Jitter = 3,   // oracle mask box jitter
  Noise = 4,    // optional sensor noise
  Phantom = 5,  // synthetic scene generation
  Test = 99,
};

/// Identifies one independent random sequence: (master seed, acquisition,
/// block, purpose). The sequence is a pure function of these fields.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint32_t acquisition = 0;
  std::uint32_t block = 0;
  Purpose purpose = Purpose::Pattern;

  bool operator==(const RngStream&) const = default;
};

/// Sequential reader over a stream. Each Philox invocation yields four 32-bit
/// words; the invocation index is the low counter word.
class RngReader {
public:
  explicit RngReader(const RngStream& stream);

  std::uint32_t next_u32();
  /// Uniform double in [0,1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; variates are produced in pairs.
  double normal();

private:
  void refill();

  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  std::size_t used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> draw_normal(const RngStream& stream, std::size_t count);
/// count fair bits as 0.0 / 1.0.
std::vector<double> draw_bits(const RngStream& stream, std::size_t count);

}  // namespace spi
