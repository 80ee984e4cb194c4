#pragma once

#include <cstdint>
#include <vector>

#include "cyclic/circle.hpp"
#include "cyclic/rng.hpp"

namespace testing_support {

inline std::vector<cyclic::Tick> ticks_of(const cyclic::SampleSet& s) { return {s.ticks().begin(), s.ticks().end()}; }

/// Points on the 64-slot grid k * 2^58. With dyadic scales this puts many
/// pairs exactly at distance r, which is where half-open arcs matter.
inline cyclic::SampleSet grid_sample(std::size_t n, cyclic::RandomStream& rng) {
  std::vector<cyclic::Tick> slots(64);
  for (std::size_t k = 0; k < 64; ++k) slots[k] = cyclic::Tick(k) << 58;
  for (std::size_t k = 0; k < n; ++k) std::swap(slots[k], slots[k + rng() % (64 - k)]);
  slots.resize(n);
  return cyclic::SampleSet::from_unsorted(slots);
}

inline std::vector<cyclic::Scale> small_scales() {
  using cyclic::Scale;
  return {Scale::rational(1, 2), Scale::rational(1, 3),  Scale::rational(2, 5),  Scale::rational(1, 4),
          Scale::rational(3, 8), Scale::rational(5, 23), Scale::rational(3, 4),  Scale::rational(1, 1),
          Scale::rational(1, 7), Scale::parse("fixed:0.6180339887"), Scale::parse("fixed:0.41421356237"),
          Scale::parse("fixed:0.25")};
}

}  // namespace testing_support
