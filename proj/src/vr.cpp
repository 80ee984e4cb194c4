#include "cyclic/vr.hpp"

#include <algorithm>

#include "cyclic/error.hpp"

namespace cyclic {

ProximityGraph build_graph(SampleSet points, const Scale& r) {
  if (!r.below_half()) {
    throw Error(Errc::scale_too_large, "Vietoris-Rips analysis needs r < 1/2, got " + r.to_string());
  }
  const auto sys = build_map(points, r);
  const auto n = sys.size();
  ProximityGraph g{std::move(points), r, std::vector<IndexArc>(n), std::vector<Index>(n)};
  for (Index x = 0; x < n; ++x) {
    // (x - r, x] starts at back(x); [x, x + r) ends at succ(x). With r < 1/2
    // the two arcs meet only in x.
    const auto fwd = static_cast<Index>((static_cast<std::size_t>(sys.succ(x)) + n - x) % n);
    const auto bwd = static_cast<Index>((static_cast<std::size_t>(x) + n - sys.back(x)) % n);
    if (static_cast<std::size_t>(fwd) + bwd + 1 > n) invariant_failure("neighbourhood arcs overlap");
    g.forward[x] = fwd;
    g.neighborhoods[x] = IndexArc{sys.back(x), static_cast<Index>(fwd + bwd + 1)};
  }
  return g;
}

ActiveSet::ActiveSet(std::size_t n) : n_(n), present_(n, 0), fenwick_(n + 1, 0) {
  for (std::size_t v = 0; v < n; ++v) present_[v] = 1;
  size_ = n;
  // Linear-time Fenwick build over all ones.
  for (std::size_t i = 1; i <= n; ++i) {
    fenwick_[i] += 1;
    const auto parent = i + (i & (~i + 1));
    if (parent <= n) fenwick_[parent] += fenwick_[i];
  }
}

ActiveSet::ActiveSet(std::size_t n, std::span<const Index> members) : n_(n), present_(n, 0), fenwick_(n + 1, 0) {
  for (auto v : members) {
    if (present_[v]) continue;
    present_[v] = 1;
    ++size_;
    for (std::size_t i = v + 1; i <= n_; i += i & (~i + 1)) ++fenwick_[i];
  }
}

void ActiveSet::erase(Index v) {
  if (!present_[v]) return;
  present_[v] = 0;
  --size_;
  for (std::size_t i = v + 1; i <= n_; i += i & (~i + 1)) --fenwick_[i];
}

std::size_t ActiveSet::prefix(std::size_t end) const {
  std::size_t total = 0;
  for (std::size_t i = end; i > 0; i -= i & (~i + 1)) total += fenwick_[i];
  return total;
}

std::size_t ActiveSet::count_in(const IndexArc& arc) const {
  if (arc.count == 0) return 0;
  const std::size_t s = arc.start;
  const std::size_t e = s + arc.count;
  if (e <= n_) return prefix(e) - prefix(s);
  return (prefix(n_) - prefix(s)) + prefix(e - n_);
}

std::optional<Index> ActiveSet::last_in(const IndexArc& arc) const {
  // Walks backwards from the arc end; callers use it on short forward arcs
  // whose far end is active in the common case.
  for (std::size_t k = arc.count; k > 0; --k) {
    const auto v = static_cast<Index>((arc.start + k - 1) % n_);
    if (present_[v]) return v;
  }
  return std::nullopt;
}

std::vector<Index> ActiveSet::members() const {
  std::vector<Index> out;
  out.reserve(size_);
  for (std::size_t v = 0; v < n_; ++v) {
    if (present_[v]) out.push_back(static_cast<Index>(v));
  }
  return out;
}

std::vector<Index> ActiveSet::members_in(const IndexArc& arc) const {
  std::vector<Index> out;
  for (std::size_t k = 0; k < arc.count; ++k) {
    const auto v = static_cast<Index>((arc.start + k) % n_);
    if (present_[v]) out.push_back(v);
  }
  return out;
}

namespace {

// Active vertices lying in both arcs.
std::size_t count_in_both(const ActiveSet& active, const IndexArc& a, const IndexArc& b, std::size_t n) {
  const auto a_lo = static_cast<std::int64_t>(a.start);
  const auto a_hi = a_lo + a.count;
  std::size_t total = 0;
  for (std::int64_t shift : {-1, 0, 1}) {
    const std::int64_t b_lo = static_cast<std::int64_t>(b.start) + shift * static_cast<std::int64_t>(n);
    const std::int64_t b_hi = b_lo + b.count;
    const auto lo = std::max(a_lo, b_lo);
    const auto hi = std::min(a_hi, b_hi);
    if (lo >= hi) continue;
    const auto start = static_cast<Index>(((lo % static_cast<std::int64_t>(n)) + n) % n);
    total += active.count_in(IndexArc{start, static_cast<Index>(hi - lo)});
  }
  return total;
}

DismantleResult finish(const ActiveSet& active, std::vector<Index> removed) {
  DismantleResult out;
  out.core = active.members();
  out.removed = std::move(removed);
  return out;
}

}  // namespace

bool dominates(const ProximityGraph& g, const ActiveSet& active, Index y, Index x) {
  if (x == y || !active.contains(x) || !active.contains(y)) return false;
  const auto& nx = g.neighborhoods[x];
  const auto& ny = g.neighborhoods[y];
  return active.count_in(nx) == count_in_both(active, nx, ny, g.size());
}

std::optional<std::pair<Index, Index>> find_dominated(const ProximityGraph& g, const ActiveSet& active) {
  for (auto x : active.members()) {
    for (auto y : active.members_in(g.neighborhoods[x])) {
      if (dominates(g, active, y, x)) return std::pair{x, y};
    }
  }
  return std::nullopt;
}

DismantleResult dismantle_greedy(const ProximityGraph& g, std::span<const Index> order) {
  ActiveSet active(g.size());
  std::vector<Index> removed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto x : order) {
      if (!active.contains(x) || active.size() == 1) continue;
      for (auto y : active.members_in(g.neighborhoods[x])) {
        if (dominates(g, active, y, x)) {
          active.erase(x);
          removed.push_back(x);
          changed = true;
          break;
        }
      }
    }
  }
  return finish(active, std::move(removed));
}

DismantleResult dismantle_to_core(const ProximityGraph& g) {
  const auto n = g.size();
  ActiveSet active(n);
  std::vector<Index> removed;
  std::vector<std::uint8_t> in_image(n, 0);

  for (;;) {
    // Image of f_r on the active set: the furthest active vertex of [x, x + r).
    std::fill(in_image.begin(), in_image.end(), 0);
    const auto members = active.members();
    for (auto x : members) {
      const auto target = active.last_in(IndexArc{x, static_cast<Index>(g.forward[x] + 1)});
      in_image[*target] = 1;
    }
    std::vector<Index> doomed;
    for (auto x : members) {
      if (!in_image[x]) doomed.push_back(x);
    }
    if (doomed.empty()) break;
    for (auto x : doomed) {
      // The first image vertex clockwise from x dominates it.
      Index y = x;
      do {
        y = static_cast<Index>((y + 1) % n);
      } while (!(active.contains(y) && in_image[y]));
      if (!dominates(g, active, y, x)) invariant_failure("vertex outside the image is not dominated");
      active.erase(x);
      removed.push_back(x);
    }
  }

  DismantleResult out;
  out.image_core = active.members();
  // A core whose graph is complete on two or more vertices dismantles further.
  while (active.size() > 1) {
    const auto pair = find_dominated(g, active);
    if (!pair) break;
    active.erase(pair->first);
    removed.push_back(pair->first);
  }
  out.core = active.members();
  out.removed = std::move(removed);
  return out;
}

std::string HomotopyType::describe() const {
  if (kind == Kind::odd_sphere) return "S^" + std::to_string(dim);
  if (copies == 0) return "point";
  return "wedge of " + std::to_string(copies) + " S^" + std::to_string(dim);
}

HomotopyType classify_homotopy(std::uint64_t ell, std::uint64_t w, std::uint64_t orb) {
  if (ell == 0 || orb == 0 || 2 * u128{w} >= ell) {
    throw Error(Errc::invalid_argument, "classification needs wf = w/l < 1/2 and at least one orbit");
  }
  // l/(2l+1) = w/ell  <=>  l (ell - 2w) = w.
  const std::uint64_t gap = ell - 2 * w;
  if (w % gap == 0) {
    const auto l = w / gap;
    return HomotopyType{HomotopyType::Kind::wedge_of_even_spheres, static_cast<unsigned>(2 * l), orb - 1};
  }
  const auto l = w / gap;  // l/(2l+1) < w/ell < (l+1)/(2l+3)
  return HomotopyType{HomotopyType::Kind::odd_sphere, static_cast<unsigned>(2 * l + 1), 1};
}

unsigned expected_sphere_dimension(const Scale& r) {
  if (!r.below_half()) {
    throw Error(Errc::scale_too_large, "sphere dimension needs r < 1/2, got " + r.to_string());
  }
  u128 num, den;
  if (r.is_rational()) {
    num = r.p();
    den = r.q() - 2 * r.p();
  } else {
    num = r.as_fixed().num;
    den = kFullTurn - 2 * u128{r.as_fixed().num};
  }
  const auto ceil = (num + den - 1) / den;
  return static_cast<unsigned>(2 * ceil - 1);
}

VrAnalysis analyze_vr(const SampleSet& points, const Scale& r) {
  const auto g = build_graph(points, r);
  const auto core = dismantle_to_core(g);
  const auto sys = build_map(points, r);
  const auto levels = periodic_and_levels(sys);
  VrAnalysis out;
  out.n = points.size();
  out.core_size = core.core.size();
  out.orbits = orbit_report(sys, levels);
  out.homotopy = classify_homotopy(out.orbits.length, out.orbits.winding, out.orbits.orbit_count);
  out.core_is_periodic_set = core.core == out.orbits.periodic_indices;
  return out;
}

}  // namespace cyclic
