#include "cyclic/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cyclic/error.hpp"

namespace cyclic {

std::uint64_t LevelHistogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<Index> PeriodicLevels::periodic_indices() const {
  std::vector<Index> out;
  out.reserve(periodic_count);
  for (std::size_t i = 0; i < periodic.size(); ++i) {
    if (periodic[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

PeriodicLevels periodic_and_levels(const DynSystem& sys) {
  const auto n = sys.size();
  std::vector<Index> indegree(n, 0);
  for (auto s : sys.successors()) ++indegree[s];

  PeriodicLevels out;
  out.level.assign(n, -1);
  std::vector<Index> layer;
  for (Index i = 0; i < n; ++i) {
    if (indegree[i] == 0) layer.push_back(i);
  }
  // Layer L holds S_L \ S_{L+1}: points whose preimages were all removed earlier.
  std::vector<Index> next_layer;
  std::int32_t depth = 0;
  while (!layer.empty()) {
    out.histogram.counts.push_back(layer.size());
    next_layer.clear();
    for (auto x : layer) {
      out.level[x] = depth;
      const auto y = sys.succ(x);
      if (--indegree[y] == 0) next_layer.push_back(y);
    }
    layer.swap(next_layer);
    ++depth;
  }

  out.periodic.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.level[i] < 0) {
      out.periodic[i] = 1;
      ++out.periodic_count;
    }
  }
  if (out.periodic_count + out.histogram.total() != n) {
    invariant_failure("periodic count and level histogram do not cover the sample");
  }
  return out;
}

OrbitReport orbit_report(const DynSystem& sys) { return orbit_report(sys, periodic_and_levels(sys)); }

OrbitReport orbit_report(const DynSystem& sys, const PeriodicLevels& levels) {
  const auto n = sys.size();
  OrbitReport report;
  report.periodic_indices = levels.periodic_indices();
  if (report.periodic_indices.empty()) invariant_failure("finite system without periodic points");

  std::vector<std::uint8_t> seen(n, 0);
  bool first = true;
  for (auto start : report.periodic_indices) {
    if (seen[start]) continue;
    std::uint64_t length = 0;
    u128 travelled = 0;
    Index x = start;
    do {
      if (!levels.periodic[x] || seen[x]) invariant_failure("orbit walk left the periodic set");
      seen[x] = 1;
      travelled += sys.step_length(x);
      x = sys.succ(x);
      ++length;
    } while (x != start);
    if (static_cast<std::uint64_t>(travelled) != 0) {
      invariant_failure("orbit tick sum is not a whole number of turns");
    }
    const auto winding = static_cast<std::uint64_t>(travelled >> 64);
    if (first) {
      report.length = length;
      report.winding = winding;
      first = false;
    } else if (report.length != length || report.winding != winding) {
      invariant_failure("periodic orbits disagree in length or winding number");
    }
    ++report.orbit_count;
  }
  if (report.winding > 0 && std::gcd(report.length, report.winding) != 1) {
    invariant_failure("length and winding number are not coprime");
  }
  if (report.length > 1 && report.winding >= report.length) {
    invariant_failure("winding number is not below the orbit length");
  }
  if (!sys.scale().exceeds_fraction(report.winding, report.length)) {
    invariant_failure("winding fraction is not below r");
  }
  return report;
}

OrbitWalker::OrbitWalker(const DynSystem& sys, const PeriodicLevels& levels)
    : sys_(&sys), periodic_(levels.periodic), orbit_of_(sys.size(), 0), position_(sys.size(), 0) {
  std::vector<std::uint8_t> seen(sys.size(), 0);
  for (Index start = 0; start < sys.size(); ++start) {
    if (!periodic_[start] || seen[start]) continue;
    const auto id = static_cast<Index>(orbits_.size());
    std::vector<Index> members;
    std::vector<u128> prefix{0};
    Index x = start;
    do {
      seen[x] = 1;
      orbit_of_[x] = id;
      position_[x] = static_cast<Index>(members.size());
      members.push_back(x);
      prefix.push_back(prefix.back() + sys.step_length(x));
      x = sys.succ(x);
    } while (x != start);
    turn_ticks_.push_back(prefix.back());
    orbits_.push_back(std::move(members));
    prefix_.push_back(std::move(prefix));
  }
}

Walk OrbitWalker::advance(Index x, std::uint64_t steps) const {
  Walk walk{x, 0};
  while (steps > 0 && !periodic_[walk.end]) {
    walk.travelled += sys_->step_length(walk.end);
    walk.end = sys_->succ(walk.end);
    --steps;
  }
  if (steps == 0) return walk;
  const auto id = orbit_of_[walk.end];
  const auto& members = orbits_[id];
  const auto& prefix = prefix_[id];
  const std::uint64_t len = members.size();
  const std::uint64_t pos = position_[walk.end];
  const std::uint64_t full = steps / len;
  const std::uint64_t rem = steps % len;
  walk.travelled += turn_ticks_[id] * full;
  if (pos + rem <= len) {
    walk.travelled += prefix[pos + rem] - prefix[pos];
  } else {
    walk.travelled += (prefix[len] - prefix[pos]) + prefix[pos + rem - len];
  }
  walk.end = members[(pos + rem) % len];
  return walk;
}

bool IndexArc::contains(Index i, std::size_t n) const noexcept {
  const auto offset = (static_cast<std::size_t>(i) + n - start) % n;
  return offset < count;
}

namespace {

// Exact tick value of r scaled by the gap denominator.
struct ScaledRadius {
  i128 value;
  std::uint64_t den;
};

ScaledRadius scaled_radius(const Scale& r) {
  if (r.is_rational()) {
    return {static_cast<i128>(u128{r.p()} << 64), r.q()};
  }
  return {static_cast<i128>(r.as_fixed().num), 1};
}

// Runs the x_j / y_j recursion for `steps` rounds, reporting each gap pair.
template <typename OnStep>
void walk_back(const DynSystem& sys, Index x0, unsigned steps, OnStep&& on_step) {
  const auto [radius, den] = scaled_radius(sys.scale());
  Index x = x0;
  Index y = sys.next(x0);
  const auto gap0 = sys.size() == 1 ? static_cast<i128>(kFullTurn) : static_cast<i128>(cw_dist(sys.tick(x0), sys.tick(y)));
  // Unwrapped arc length d(x_j, y_j), scaled by den.
  i128 length = gap0 * static_cast<i128>(den);
  on_step(0u, x, y, length, gap0 * static_cast<i128>(den), i128{0});
  for (unsigned j = 1; j <= steps; ++j) {
    const Index xb = sys.back(x);
    const Index yb = sys.back(y);
    const i128 w = radius - static_cast<i128>(cw_dist(sys.tick(xb), sys.tick(x))) * static_cast<i128>(den);
    const i128 z = radius - static_cast<i128>(cw_dist(sys.tick(yb), sys.tick(y))) * static_cast<i128>(den);
    x = xb;
    y = yb;
    length += z - w;
    on_step(j, x, y, length, z, w);
  }
}

}  // namespace

IndexArc preimage_interval(const DynSystem& sys, Index x0, unsigned i) {
  const auto n = sys.size();
  const auto den = scaled_radius(sys.scale()).den;
  const i128 full = static_cast<i128>(kFullTurn) * static_cast<i128>(den);
  IndexArc arc;
  walk_back(sys, x0, i, [&](unsigned j, Index x, Index y, i128 length, i128, i128) {
    if (j != i) return;
    if (length < 0 || length > full) invariant_failure("preimage arc length out of range");
    if (length == 0) {
      if (x != y) invariant_failure("empty preimage arc with distinct endpoints");
      arc = IndexArc{x, 0};
      return;
    }
    auto count = static_cast<Index>((static_cast<std::size_t>(y) + n - x) % n);
    if (count == 0) {
      if (length != full) invariant_failure("preimage arc wraps without covering the circle");
      count = static_cast<Index>(n);
    }
    arc = IndexArc{x, count};
  });
  return arc;
}

GapSequence gap_sequence(const DynSystem& sys, Index x0, unsigned depth) {
  GapSequence gaps;
  gaps.den = scaled_radius(sys.scale()).den;
  // z_1 comes from the first gap; z_{j+1} and w_j from round j.
  walk_back(sys, x0, depth + 1, [&](unsigned j, Index, Index, i128, i128 z, i128 w) {
    if (j == 0) {
      gaps.z.push_back(z);
      return;
    }
    gaps.w.push_back(w);
    if (j <= depth) gaps.z.push_back(z);
  });
  return gaps;
}

std::optional<unsigned> level_from_gaps(const GapSequence& gaps) {
  i128 zsum = 0;
  i128 wsum = 0;
  const auto rounds = std::min(gaps.z.size(), gaps.w.size());
  for (std::size_t j = 0; j < rounds; ++j) {
    zsum += gaps.z[j];
    wsum += gaps.w[j];
    if (wsum > zsum) return static_cast<unsigned>(j);
  }
  return std::nullopt;
}

bool is_swift(const DynSystem& sys, Index x, unsigned i) {
  const auto& rat = sys.scale().as_rational();
  const auto n = sys.size();
  if (n == 1) return false;
  const auto levels = periodic_and_levels(sys);
  const OrbitWalker walker(sys, levels);
  const auto q_walk = walker.advance(x, rat.q);
  const u128 closed = q_walk.travelled + cw_dist(sys.tick(q_walk.end), sys.tick(x));
  if (closed != u128{rat.p} << 64) return false;
  const auto target = walker.advance(q_walk.end, i).end;
  const auto arc = preimage_interval(sys, target, i);
  if (arc.empty() || arc.count == n) return false;
  return (static_cast<std::size_t>(arc.start) + arc.count) % n == x;
}

std::uint64_t SwiftReport::typed_total() const noexcept {
  return std::accumulate(type_counts.begin(), type_counts.end(), std::uint64_t{0});
}

SwiftReport swiftness_types(const DynSystem& sys, unsigned i_max) {
  const auto levels = periodic_and_levels(sys);
  return swiftness_types(sys, levels, orbit_report(sys, levels), i_max);
}

SwiftReport swiftness_types(const DynSystem& sys, const PeriodicLevels& levels,
                            const OrbitReport& orbits, unsigned i_max) {
  const auto& rat = sys.scale().as_rational();
  const auto n = sys.size();
  SwiftReport report;
  report.i_max = i_max;
  report.type_counts.assign(i_max + 1, 0);
  report.type_of.assign(n, -1);

  if (n > 1) {
    const OrbitWalker walker(sys, levels);
    const u128 turns = u128{rat.p} << 64;
    for (Index x = 0; x < n; ++x) {
      const auto q_walk = walker.advance(x, rat.q);
      if (q_walk.travelled + cw_dist(sys.tick(q_walk.end), sys.tick(x)) != turns) continue;
      // x is (q, i)-swift iff prev(x) lies in the fibre f^{-i}(f^i(y)) of
      // y = f^q(x) while x does not; the fibre is an arc containing y.
      Index a = sys.prev(x);
      Index b = q_walk.end;
      Index c = x;
      for (unsigned i = 0; i <= i_max; ++i) {
        if (c == b) break;  // x has merged into the fibre for good
        if (a == b) {
          report.any_swift = true;
          if (i == 0) report.q_swift_indices.push_back(x);
          if (!levels.periodic[b]) invariant_failure("image of a swift point is not periodic");
          auto& type = report.type_of[b];
          if (type < 0 || static_cast<unsigned>(type) > i) type = static_cast<std::int32_t>(i);
        }
        a = sys.succ(a);
        b = sys.succ(b);
        c = sys.succ(c);
      }
    }
  }

  for (Index z = 0; z < n; ++z) {
    if (!levels.periodic[z]) continue;
    if (report.type_of[z] >= 0) {
      ++report.type_counts[static_cast<std::size_t>(report.type_of[z])];
    } else {
      ++report.untyped;
    }
  }

  if (report.any_swift) {
    const auto lhs = u128{orbits.length} * rat.p;
    const auto rhs = u128{orbits.winding} * rat.q;
    if (orbits.orbit_count != 1 || lhs != rhs + 1) {
      invariant_failure("swift point present but l p - w q != 1 or several orbits");
    }
  }
  return report;
}

DynSystem make_regular(std::uint32_t n, std::uint32_t k) {
  if (n == 0 || k >= n) {
    throw Error(Errc::invalid_argument, "regular system needs 0 <= k < n");
  }
  std::vector<Tick> ticks(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    ticks[j] = static_cast<Tick>((u128{j} << 64) / n);
  }
  auto sys = build_map(SampleSet(std::move(ticks)), Scale::rational(2 * std::uint64_t{k} + 1, 2 * std::uint64_t{n}));
  for (std::uint32_t j = 0; j < n; ++j) {
    if (sys.succ(j) != (j + k) % n) invariant_failure("regular system does not shift by k");
  }
  return sys;
}

}  // namespace cyclic
