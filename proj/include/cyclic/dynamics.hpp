#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cyclic/circle.hpp"

namespace cyclic {

/// counts[i] = lev_i(X, r), the number of non-periodic points at level i.
struct LevelHistogram {
  std::vector<std::uint64_t> counts;

  /// Largest occupied level, or -1 when every point is periodic.
  int max_level() const noexcept { return static_cast<int>(counts.size()) - 1; }
  std::uint64_t total() const noexcept;
};

struct PeriodicLevels {
  std::vector<std::uint8_t> periodic;  // 1 for periodic points
  LevelHistogram histogram;
  std::vector<std::int32_t> level;  // -1 for periodic points
  std::size_t periodic_count = 0;

  std::vector<Index> periodic_indices() const;
};

/// Peels image sets S_{i+1} = f(S_i) until they stabilise on the periodic set.
PeriodicLevels periodic_and_levels(const DynSystem& sys);

struct OrbitReport {
  std::uint64_t length = 0;       // l
  std::uint64_t winding = 0;      // w
  std::uint64_t orbit_count = 0;  // orb(X, r)
  std::vector<Index> periodic_indices;

  std::uint64_t wf_num() const noexcept { return winding; }
  std::uint64_t wf_den() const noexcept { return length; }
  std::size_t per() const noexcept { return periodic_indices.size(); }
};

/// Length, winding number and count of the periodic orbits. Throws
/// InternalInvariantViolation if orbits disagree or a cycle does not close
/// on a whole number of turns.
OrbitReport orbit_report(const DynSystem& sys);
OrbitReport orbit_report(const DynSystem& sys, const PeriodicLevels& levels);

/// Position reached by iterating f_r and the exact clockwise distance covered.
struct Walk {
  Index end = 0;
  u128 travelled = 0;
};

/// Answers f_r^m(x) for arbitrary m in O(level of x) using orbit prefix sums.
class OrbitWalker {
 public:
  OrbitWalker(const DynSystem& sys, const PeriodicLevels& levels);

  Walk advance(Index x, std::uint64_t steps) const;

 private:
  const DynSystem* sys_;
  std::vector<std::uint8_t> periodic_;
  std::vector<Index> orbit_of_;
  std::vector<Index> position_;
  std::vector<std::vector<Index>> orbits_;
  std::vector<std::vector<u128>> prefix_;  // prefix_[o][k]: ticks of first k steps
  std::vector<u128> turn_ticks_;           // ticks of a full cycle of orbit o
};

/// Half-open cyclic run of indices [start, start + count).
struct IndexArc {
  Index start = 0;
  Index count = 0;

  bool empty() const noexcept { return count == 0; }
  bool contains(Index i, std::size_t n) const noexcept;
};

/// f_r^{-i}(x0) as the index arc [x_i, y_i), following the x_j / y_j
/// recursion through back-reach pointers.
IndexArc preimage_interval(const DynSystem& sys, Index x0, unsigned i);

/// Gap distances z_1..z_{i+1}, w_1..w_{i+1}. Each value is numerator / den
/// ticks; den is q for a rational scale and 1 for a fixed one.
struct GapSequence {
  std::vector<i128> z;
  std::vector<i128> w;
  std::uint64_t den = 1;
};

GapSequence gap_sequence(const DynSystem& sys, Index x0, unsigned depth);

/// Level of x0 read off prefix sums: the first i with
/// w_1 + ... + w_{i+1} > z_1 + ... + z_{i+1}. Empty if all prefix
/// inequalities in the sequence hold.
std::optional<unsigned> level_from_gaps(const GapSequence& gaps);

/// (q, i)-swiftness of x. Requires a rational scale. An empty preimage set
/// makes x not swift.
bool is_swift(const DynSystem& sys, Index x, unsigned i);

inline constexpr unsigned kDefaultIMax = 64;

struct SwiftReport {
  std::vector<Index> q_swift_indices;    // (q, 0)-swift points
  std::vector<std::uint64_t> type_counts;  // type_counts[i] = swi_i(X, p/q)
  std::vector<std::int32_t> type_of;     // per point; -1 if untyped or not periodic
  std::uint64_t untyped = 0;             // periodic points with no type <= i_max
  unsigned i_max = kDefaultIMax;
  bool any_swift = false;

  std::uint64_t typed_total() const noexcept;
};

/// Swiftness type of every periodic point, for types 0..i_max. When any swift
/// point exists the single-orbit identity l p - w q = 1 is asserted.
SwiftReport swiftness_types(const DynSystem& sys, unsigned i_max = kDefaultIMax);
SwiftReport swiftness_types(const DynSystem& sys, const PeriodicLevels& levels,
                            const OrbitReport& orbits, unsigned i_max = kDefaultIMax);

/// Reg_n^k: n equally spaced points, r = (2k + 1) / (2n) so that f(j) = j + k.
DynSystem make_regular(std::uint32_t n, std::uint32_t k);

}  // namespace cyclic
