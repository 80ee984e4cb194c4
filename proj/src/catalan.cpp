#include "cyclic/catalan.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "cyclic/error.hpp"

namespace cyclic {

std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const ExactRational& x) {
  const auto den = denominator_of(x);
  if (den == 1) return numerator_of(x).str();
  return numerator_of(x).str() + "/" + den.str();
}

ExactRational pow2(int k) {
  BigInt one = 1;
  if (k >= 0) return ExactRational(BigInt(one << k));
  return ExactRational(one, BigInt(one << -k));
}

BigInt catalan(unsigned i) {
  // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step.
  BigInt c = 1;
  for (unsigned k = 0; k < i; ++k) {
    c *= 2 * (2 * BigInt(k) + 1);
    c /= (k + 2);
  }
  return c;
}

namespace {

// Number of lattice paths with `ups` up-steps and `downs` down-steps that
// start at height 0 and never leave [0, h].
BigInt bounded_paths(unsigned ups, unsigned downs, int h) {
  if (h < 0) return 0;
  const auto height = std::min<std::size_t>(static_cast<std::size_t>(h), ups);
  // ways[u][y]: paths using u up-steps currently at height y. Downs are
  // determined by (u, y) as u - y.
  std::vector<BigInt> ways(height + 1, 0);
  ways[0] = 1;
  const unsigned steps = ups + downs;
  // Track paths step by step; state is height only, the number of up-steps
  // used is (step + height) / 2.
  for (unsigned s = 0; s < steps; ++s) {
    std::vector<BigInt> next(height + 1, 0);
    for (std::size_t y = 0; y <= height; ++y) {
      if (ways[y] == 0) continue;
      const unsigned used_up = (s + static_cast<unsigned>(y)) / 2;
      const unsigned used_down = s - used_up;
      if (y < height && used_up < ups) next[y + 1] += ways[y];
      if (y > 0 && used_down < downs) next[y - 1] += ways[y];
    }
    ways.swap(next);
  }
  const std::size_t end_height = ups - downs;
  return end_height <= height ? ways[end_height] : BigInt(0);
}

}  // namespace

BigInt catalan_bounded(unsigned i, int h) { return bounded_paths(i, i, h); }

BigInt catalan_prime(unsigned i, int h) {
  if (h < 0) return 0;
  return bounded_paths(i + static_cast<unsigned>(h), i, h);
}

ExactRational gf_quarter_closed(GfFamily family, unsigned h) {
  switch (family) {
    case GfFamily::plain: return 2;
    case GfFamily::bounded: return ExactRational(2 * BigInt(h + 1), BigInt(h + 2));
    case GfFamily::prime: return ExactRational(BigInt(1) << (h + 1), BigInt(h + 2));
  }
  return 0;
}

ExactRational gf_quarter_recurrence(GfFamily family, unsigned h) {
  const ExactRational x(1, 4);
  if (family == GfFamily::plain) {
    // C = 1 + x C^2 has the root 2 at x = 1/4; confirm it satisfies the equation.
    const ExactRational c = 2;
    if (c != 1 + x * c * c) invariant_failure("C(1/4) = 2 fails C = 1 + x C^2");
    return c;
  }
  ExactRational bounded = 1;  // C_0
  ExactRational prime = 1;    // C'_0
  for (unsigned k = 1; k <= h; ++k) {
    bounded = 1 / (1 - x * bounded);
    prime *= bounded;
  }
  return family == GfFamily::bounded ? bounded : prime;
}

ExactRational gf_quarter_chebyshev(GfFamily family, unsigned h) {
  if (family == GfFamily::plain) return 2;
  // U_k(1) from U_0 = 1, U_1 = 2, U_k = 2 U_{k-1} - U_{k-2}; sqrt(1/4) = 1/2.
  std::vector<BigInt> u{1, 2};
  while (u.size() < h + 2) u.push_back(2 * u[u.size() - 1] - u[u.size() - 2]);
  auto c_h = [&](unsigned k) { return ExactRational(u[k]) / (ExactRational(1, 2) * u[k + 1]); };
  if (family == GfFamily::bounded) return c_h(h);
  ExactRational prime = 1;
  for (unsigned k = 1; k <= h; ++k) prime *= c_h(k);
  return prime;
}

ExactRational gf_quarter(GfFamily family, unsigned h) {
  const auto closed = gf_quarter_closed(family, h);
  if (closed != gf_quarter_recurrence(family, h) || closed != gf_quarter_chebyshev(family, h)) {
    invariant_failure("generating function evaluations at 1/4 disagree for h = " + std::to_string(h));
  }
  return closed;
}

ExactRational predicted_level_fraction(unsigned i, const Scale& r) {
  const BigInt paths = r.is_rational() ? catalan_bounded(i, static_cast<int>(r.q()) - 2) : catalan(i);
  return ExactRational(paths) / pow2(2 * static_cast<int>(i) + 1);
}

ExactRational predicted_swift_fraction(unsigned i, std::uint64_t p, std::uint64_t q) {
  if (q < 2 || p == 0 || p > q || std::gcd(p, q) != 1) {
    throw Error(Errc::invalid_argument, "swift fraction needs coprime 0 < p <= q with q >= 2");
  }
  if (q > kMaxSwiftDenominator) throw Error(Errc::too_large, "q exceeds 2^16");
  const int h = static_cast<int>(q) - 2;
  return ExactRational(catalan_prime(i, h)) / pow2(2 * static_cast<int>(i) + static_cast<int>(q) - 1);
}

ExactRational predicted_periodic_fraction(const Scale& r) {
  if (!r.is_rational()) return 0;
  return ExactRational(BigInt(1), BigInt(r.q()));
}

ExactRational level_tail_fixed(unsigned n_max) {
  // binom(2m, m) with m = n_max + 1.
  const unsigned m = n_max + 1;
  BigInt central = catalan(m) * (m + 1);
  return ExactRational(central) / pow2(2 * static_cast<int>(m));
}

}  // namespace cyclic
