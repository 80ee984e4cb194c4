#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cyclic/circle.hpp"
#include "cyclic/dynamics.hpp"

namespace cyclic {

/// Proximity graph of a circle sample at scale r < 1/2; its clique complex is
/// VR(X; r). Closed neighbourhoods are contiguous index arcs.
struct ProximityGraph {
  SampleSet points;
  Scale r;
  std::vector<IndexArc> neighborhoods;  // N[x] = X cap (x - r, x + r)
  std::vector<Index> forward;           // neighbours in [x, x + r), excluding x

  std::size_t size() const noexcept { return points.size(); }
  bool adjacent(Index x, Index y) const noexcept { return neighborhoods[x].contains(y, size()); }
};

/// Throws ScaleTooLarge unless r < 1/2.
ProximityGraph build_graph(SampleSet points, const Scale& r);

/// Vertices still present while dismantling.
class ActiveSet {
 public:
  explicit ActiveSet(std::size_t n);
  explicit ActiveSet(std::size_t n, std::span<const Index> members);

  bool contains(Index v) const noexcept { return present_[v] != 0; }
  void erase(Index v);
  std::size_t size() const noexcept { return size_; }
  std::size_t count_in(const IndexArc& arc) const;
  std::optional<Index> last_in(const IndexArc& arc) const;
  std::vector<Index> members() const;
  std::vector<Index> members_in(const IndexArc& arc) const;

 private:
  std::size_t prefix(std::size_t end) const;  // active vertices with index < end
  std::size_t n_;
  std::size_t size_ = 0;
  std::vector<std::uint8_t> present_;
  std::vector<std::size_t> fenwick_;
};

/// N[x] subset of N[y] inside the graph induced on `active`.
bool dominates(const ProximityGraph& g, const ActiveSet& active, Index y, Index x);

/// Some (dominated, dominator) pair among the active vertices, if any.
std::optional<std::pair<Index, Index>> find_dominated(const ProximityGraph& g, const ActiveSet& active);

struct DismantleResult {
  std::vector<Index> core;     // sorted survivors
  std::vector<Index> removed;  // in removal order
  // Survivors when only vertices outside the image of f_r were removed.
  std::vector<Index> image_core;
};

/// Removes non-image vertices round by round (each is checked to be
/// dominated by the next image vertex clockwise), then any dominated vertex
/// left, until no vertex is dominated.
DismantleResult dismantle_to_core(const ProximityGraph& g);

/// Removes dominated vertices scanning in `order`, repeating until stable.
DismantleResult dismantle_greedy(const ProximityGraph& g, std::span<const Index> order);

struct HomotopyType {
  enum class Kind { odd_sphere, wedge_of_even_spheres };
  Kind kind = Kind::odd_sphere;
  unsigned dim = 1;
  std::uint64_t copies = 1;  // wedge summands; zero means a point

  bool is_point() const noexcept { return kind == Kind::wedge_of_even_spheres && copies == 0; }
  std::string describe() const;
  friend bool operator==(const HomotopyType&, const HomotopyType&) = default;
};

/// Homotopy type of VR(X; r) from the winding data of f_r. Requires w / l < 1/2.
HomotopyType classify_homotopy(std::uint64_t ell, std::uint64_t w, std::uint64_t orb);

/// 2 ceil(r / (1 - 2r)) - 1. Throws ScaleTooLarge unless r < 1/2.
unsigned expected_sphere_dimension(const Scale& r);

struct VrAnalysis {
  std::size_t n = 0;
  std::size_t core_size = 0;
  OrbitReport orbits;
  HomotopyType homotopy;
  bool core_is_periodic_set = false;
};

VrAnalysis analyze_vr(const SampleSet& points, const Scale& r);

}  // namespace cyclic
