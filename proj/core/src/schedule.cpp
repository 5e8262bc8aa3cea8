#include "spi/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spi/error.hpp"

namespace spi {

namespace {

void check(double base, std::size_t acquisitions) {
  if (!(base > 1.0) || !std::isfinite(base))
    fail(ErrorKind::Config, "feedback base K must be > 1, got " + std::to_string(base));
  if (acquisitions == 0) fail(ErrorKind::Config, "acquisition count M' must be >= 1");
}

// floor(K^t) with a relative guard so exact integer powers never round down.
template <typename Fn>
void for_each_power(double base, std::size_t acquisitions, Fn&& fn) {
  for (int t = 0;; ++t) {
    const double value = std::pow(base, t);
    const auto index = static_cast<std::size_t>(std::floor(value * (1.0 + 1e-12)));
    if (index >= acquisitions) break;
    fn(index);
  }
}

}  // namespace

std::vector<std::size_t> feedback_schedule(double base, std::size_t acquisitions) {
  check(base, acquisitions);
  std::vector<std::size_t> out;
  for_each_power(base, acquisitions, [&](std::size_t i) {
    if (out.empty() || out.back() != i) out.push_back(i);
  });
  return out;
}

std::size_t feedback_exponent_count(double base, std::size_t acquisitions) {
  check(base, acquisitions);
  std::size_t count = 0;
  for_each_power(base, acquisitions, [&](std::size_t) { ++count; });
  return count;
}

bool is_feedback_index(const std::vector<std::size_t>& schedule, std::size_t i) {
  return std::binary_search(schedule.begin(), schedule.end(), i);
}

}  // namespace spi
