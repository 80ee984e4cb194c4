#include "cyclic/circle.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "cyclic/error.hpp"

namespace cyclic {

namespace {

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw Error(Errc::invalid_argument, "cannot parse " + std::string(what) + " '" +
                                            std::string(text) + "'");
  }
  return value;
}

// Truncates a decimal in [0, 1) such as "0.618" or ".618" to ticks.
Tick decimal_to_ticks(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && digits.front() == '0') digits.remove_prefix(1);
  if (digits.empty() || digits.front() != '.') {
    throw Error(Errc::invalid_argument, "fixed scale must be a decimal in (0,1): '" +
                                            std::string(text) + "'");
  }
  digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(Errc::invalid_argument, "bad decimal digits in '" + std::string(text) + "'");
  }
  using boost::multiprecision::cpp_int;
  cpp_int numerator{std::string(digits)};
  cpp_int denominator = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(digits.size()));
  cpp_int ticks = (numerator << 64) / denominator;
  return ticks.convert_to<Tick>();
}

}  // namespace

Scale Scale::rational(std::uint64_t p, std::uint64_t q) {
  if (p == 0 || q == 0 || p > q) {
    throw Error(Errc::invalid_argument, "rational scale needs 0 < p <= q, got " +
                                            std::to_string(p) + "/" + std::to_string(q));
  }
  const auto g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q >= kMaxDenominator) {
    throw Error(Errc::invalid_argument, "denominator " + std::to_string(q) + " exceeds 2^32");
  }
  return Scale(Rational{p, q});
}

Scale Scale::fixed(Tick num) {
  if (num == 0) throw Error(Errc::invalid_argument, "fixed scale must be positive");
  return Scale(Fixed{num});
}

Scale Scale::parse(std::string_view text) {
  constexpr std::string_view kFixed = "fixed:";
  if (text.substr(0, kFixed.size()) == kFixed) {
    return fixed(decimal_to_ticks(text.substr(kFixed.size())));
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw Error(Errc::invalid_argument, "scale must be P/Q or fixed:0.ddd, got '" +
                                            std::string(text) + "'");
  }
  return rational(parse_u64(text.substr(0, slash), "numerator"),
                  parse_u64(text.substr(slash + 1), "denominator"));
}

const Scale::Rational& Scale::as_rational() const {
  if (const auto* rat = std::get_if<Rational>(&value_)) return *rat;
  throw Error(Errc::not_rational, "scale " + to_string() + " is not rational");
}

const Scale::Fixed& Scale::as_fixed() const {
  if (const auto* fx = std::get_if<Fixed>(&value_)) return *fx;
  throw Error(Errc::invalid_argument, "scale " + to_string() + " is not fixed-point");
}

bool Scale::exceeds_fraction(std::uint64_t w, std::uint64_t ell) const noexcept {
  if (const auto* rat = std::get_if<Rational>(&value_)) {
    return u128{w} * rat->q < u128{rat->p} * ell;
  }
  return (u128{w} << 64) < u128{std::get<Fixed>(value_).num} * ell;
}

bool Scale::is_full_turn() const noexcept {
  const auto* rat = std::get_if<Rational>(&value_);
  return rat != nullptr && rat->p == rat->q;
}

bool Scale::below_half() const noexcept {
  if (const auto* rat = std::get_if<Rational>(&value_)) return 2 * rat->p < rat->q;
  return std::get<Fixed>(value_).num < (Tick{1} << 63);
}

double Scale::to_double() const noexcept {
  if (const auto* rat = std::get_if<Rational>(&value_)) {
    return static_cast<double>(rat->p) / static_cast<double>(rat->q);
  }
  return static_cast<double>(std::get<Fixed>(value_).num) * 0x1p-64;
}

std::string Scale::to_string() const {
  if (const auto* rat = std::get_if<Rational>(&value_)) {
    return std::to_string(rat->p) + "/" + std::to_string(rat->q);
  }
  return "fixed:" + std::to_string(std::get<Fixed>(value_).num);
}

SampleSet::SampleSet(std::vector<Tick> sorted_ticks) : ticks_(std::move(sorted_ticks)) {
  if (ticks_.empty()) throw Error(Errc::invalid_argument, "sample set must be nonempty");
  if (ticks_.size() > std::size_t{1} << 31) {
    throw Error(Errc::too_large, "sample sets are limited to 2^31 points");
  }
  for (std::size_t i = 1; i < ticks_.size(); ++i) {
    if (ticks_[i] == ticks_[i - 1]) {
      throw Error(Errc::duplicate_points, "tick " + std::to_string(ticks_[i]) + " repeated");
    }
    if (ticks_[i] < ticks_[i - 1]) {
      throw Error(Errc::invalid_argument, "ticks must be strictly increasing");
    }
  }
}

SampleSet SampleSet::from_unsorted(std::vector<Tick> ticks) {
  std::sort(ticks.begin(), ticks.end());
  return SampleSet(std::move(ticks));
}

SampleSet sample_uniform(std::size_t n, RandomStream& rng) {
  if (n == 0) throw Error(Errc::invalid_argument, "sample size must be at least 1");
  std::vector<Tick> ticks(n);
  for (auto& t : ticks) t = rng();
  std::sort(ticks.begin(), ticks.end());
  // Collisions are astronomically rare; redraw until the set is distinct.
  for (;;) {
    auto last = std::unique(ticks.begin(), ticks.end());
    if (last == ticks.end()) break;
    const auto missing = static_cast<std::size_t>(ticks.end() - last);
    ticks.erase(last, ticks.end());
    for (std::size_t k = 0; k < missing; ++k) ticks.push_back(rng());
    std::sort(ticks.begin(), ticks.end());
  }
  return SampleSet(std::move(ticks));
}

DynSystem::DynSystem(SampleSet points, Scale r)
    : points_(std::move(points)), r_(r), succ_(points_.size()), back_(points_.size()) {
  const auto n = static_cast<std::int64_t>(points_.size());
  auto at = [&](std::int64_t unwrapped) { return points_[static_cast<std::size_t>(((unwrapped % n) + n) % n)]; };

  // Furthest point of the arc [x_i, x_i + r); monotone in i.
  std::int64_t far = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    far = std::max(far, i);
    while (far + 1 <= i + n - 1 && r_.exceeds_distance(cw_dist(points_[i], at(far + 1)))) ++far;
    succ_[i] = static_cast<Index>(far % n);
  }

  // Earliest point whose arc contains x_i; searched in (i - n, i], monotone in i.
  std::int64_t early = 1 - n;
  for (std::int64_t i = 0; i < n; ++i) {
    early = std::max(early, i - n + 1);
    while (early < i && !r_.exceeds_distance(cw_dist(at(early), points_[i]))) ++early;
    back_[i] = static_cast<Index>(((early % n) + n) % n);
  }
}

DynSystem build_map(SampleSet points, const Scale& r) { return DynSystem(std::move(points), r); }

std::string to_text(const SampleSet& set) {
  std::string out;
  out.reserve(set.size() * 21);
  for (auto t : set.ticks()) {
    out += std::to_string(t);
    out += '\n';
  }
  return out;
}

SampleSet sample_set_from_text(std::string_view text) {
  std::vector<Tick> ticks;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (!line.empty()) ticks.push_back(parse_u64(line, "tick"));
    pos = end + 1;
  }
  return SampleSet::from_unsorted(std::move(ticks));
}

}  // namespace cyclic
