#include "spi/rng.hpp"

#include <cmath>
#include <numbers>

namespace spi {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RngReader::RngReader(const RngStream& stream)
    : key_{static_cast<std::uint32_t>(stream.seed), static_cast<std::uint32_t>(stream.seed >> 32)},
      counter_{0, static_cast<std::uint32_t>(stream.purpose), stream.acquisition, stream.block} {}

void RngReader::refill() {
  block_ = philox4x32(counter_, key_);
  ++counter_[0];
  used_ = 0;
}

std::uint32_t RngReader::next_u32() {
  if (used_ == 4) refill();
  return block_[used_++];
}

double RngReader::uniform() {
  const std::uint64_t hi = next_u32() >> 5;  // 27 bits
  const std::uint64_t lo = next_u32() >> 6;  // 26 bits
  return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

double RngReader::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0,1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<double> draw_normal(const RngStream& stream, std::size_t count) {
  RngReader reader(stream);
  std::vector<double> out(count);
  for (double& v : out) v = reader.normal();
  return out;
}

std::vector<double> draw_bits(const RngStream& stream, std::size_t count) {
  RngReader reader(stream);
  std::vector<double> out(count);
  std::uint32_t word = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (k % 32 == 0) word = reader.next_u32();
    out[k] = static_cast<double>((word >> (k % 32)) & 1U);
  }
  return out;
}

}  // namespace spi
