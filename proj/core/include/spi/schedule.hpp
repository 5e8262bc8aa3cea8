#pragma once

#include <cstddef>
#include <vector>

namespace spi {

/// Acquisition indices at which the provisional reconstruction and the
/// sampling weight are recomputed: { floor(K^t) : t = 0, 1, ... } restricted to
/// [1, M'), deduplicated and ascending. An index equal to M' is excluded
/// because a weight produced there would only affect acquisition M' + 1.
/// Throws a config error if K <= 1 or M' == 0.
std::vector<std::size_t> feedback_schedule(double base, std::size_t acquisitions);

/// Number of exponents t >= 0 with floor(K^t) < M'. Equals the schedule size
/// unless small K makes floor(K^t) collide (K = 1.5 hits 1 twice).
std::size_t feedback_exponent_count(double base, std::size_t acquisitions);

bool is_feedback_index(const std::vector<std::size_t>& schedule, std::size_t i);

}  // namespace spi
