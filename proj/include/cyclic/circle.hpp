#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cyclic/rng.hpp"

namespace cyclic {

using Tick = std::uint64_t;
using Index = std::uint32_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// A point of S^1 = R/Z stored as tick / 2^64.
struct CirclePoint {
  Tick tick = 0;
  friend constexpr bool operator==(CirclePoint, CirclePoint) = default;
};

/// Clockwise distance from x to y in ticks, (y - x) mod 2^64.
constexpr Tick cw_dist(CirclePoint x, CirclePoint y) noexcept { return y.tick - x.tick; }
constexpr Tick cw_dist(Tick x, Tick y) noexcept { return y - x; }

inline constexpr u128 kFullTurn = u128{1} << 64;

/// The scale r, either an exact fraction p/q in (0, 1] or a fixed-point
/// value num / 2^64 standing in for an irrational number.
class Scale {
 public:
  struct Rational {
    std::uint64_t p = 1;
    std::uint64_t q = 1;
    friend bool operator==(const Rational&, const Rational&) = default;
  };
  struct Fixed {
    Tick num = 0;
    friend bool operator==(const Fixed&, const Fixed&) = default;
  };

  // Denominators are capped so that q * ticks products stay inside 128 bits
  // with room for sums.
  static constexpr std::uint64_t kMaxDenominator = std::uint64_t{1} << 32;

  /// p/q reduced to lowest terms. Requires 0 < p <= q < 2^32.
  static Scale rational(std::uint64_t p, std::uint64_t q);
  /// num / 2^64 with num >= 1.
  static Scale fixed(Tick num);
  /// Accepts "P/Q" or "fixed:0.ddd" (decimal truncated toward zero to ticks).
  static Scale parse(std::string_view text);

  bool is_rational() const noexcept { return std::holds_alternative<Rational>(value_); }
  const Rational& as_rational() const;
  const Fixed& as_fixed() const;
  std::uint64_t p() const { return as_rational().p; }
  std::uint64_t q() const { return as_rational().q; }

  /// True iff a clockwise distance of `d` ticks is strictly less than r.
  bool exceeds_distance(Tick d) const noexcept {
    if (const auto* rat = std::get_if<Rational>(&value_)) {
      return u128{d} * rat->q < u128{rat->p} << 64;
    }
    return d < std::get<Fixed>(value_).num;
  }
  /// True iff w / ell < r, exactly.
  bool exceeds_fraction(std::uint64_t w, std::uint64_t ell) const noexcept;
  bool is_full_turn() const noexcept;
  bool below_half() const noexcept;

  double to_double() const noexcept;
  /// "p/q" or "fixed:<ticks>".
  std::string to_string() const;

  friend bool operator==(const Scale&, const Scale&) = default;

 private:
  explicit Scale(std::variant<Rational, Fixed> v) : value_(v) {}
  std::variant<Rational, Fixed> value_;
};

/// True iff y lies in the half-open clockwise arc [x, x + r).
inline bool arc_contains(CirclePoint x, const Scale& r, CirclePoint y) noexcept {
  return r.exceeds_distance(cw_dist(x, y));
}

/// A finite subset of S^1: strictly increasing ticks, n >= 1.
class SampleSet {
 public:
  /// Requires strictly increasing input; equal neighbours raise DuplicatePoints.
  explicit SampleSet(std::vector<Tick> sorted_ticks);
  /// Sorts first; repeated ticks raise DuplicatePoints.
  static SampleSet from_unsorted(std::vector<Tick> ticks);

  std::size_t size() const noexcept { return ticks_.size(); }
  Tick operator[](std::size_t i) const noexcept { return ticks_[i]; }
  std::span<const Tick> ticks() const noexcept { return ticks_; }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  std::vector<Tick> ticks_;
};

/// n distinct uniform ticks, sorted. Colliding draws are redrawn.
SampleSet sample_uniform(std::size_t n, RandomStream& rng);

/// The map f_r on a SampleSet together with the tables every analysis needs.
class DynSystem {
 public:
  DynSystem(SampleSet points, Scale r);

  const SampleSet& points() const noexcept { return points_; }
  const Scale& scale() const noexcept { return r_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// Index of f_r(x_i).
  Index succ(Index i) const noexcept { return succ_[i]; }
  std::span<const Index> successors() const noexcept { return succ_; }
  /// Index of the first point of X strictly clockwise after x_i - r; the
  /// cyclically earliest point whose arc [z, z + r) contains x_i.
  Index back(Index i) const noexcept { return back_[i]; }

  Index next(Index i) const noexcept { return i + 1 == size() ? 0 : i + 1; }
  Index prev(Index i) const noexcept { return i == 0 ? static_cast<Index>(size() - 1) : i - 1; }
  Tick tick(Index i) const noexcept { return points_[i]; }
  /// Clockwise distance travelled by one step from x_i.
  Tick step_length(Index i) const noexcept { return cw_dist(tick(i), tick(succ_[i])); }

 private:
  SampleSet points_;
  Scale r_;
  std::vector<Index> succ_;
  std::vector<Index> back_;
};

/// f_r built with a linear two-pointer sweep.
DynSystem build_map(SampleSet points, const Scale& r);

// Newline-delimited decimal ticks.
std::string to_text(const SampleSet& set);
SampleSet sample_set_from_text(std::string_view text);

}  // namespace cyclic
