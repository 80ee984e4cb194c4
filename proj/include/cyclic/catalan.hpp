#pragma once

#include <cstdint>

#include "cyclic/circle.hpp"
#include "cyclic/exact.hpp"

namespace cyclic {

/// C_i = binom(2i, i) / (i + 1).
BigInt catalan(unsigned i);

/// C_{i,h}: Dyck paths of order i staying within height h. Zero for h < 0.
BigInt catalan_bounded(unsigned i, int h);

/// C'_{i,h}: paths with i + h up-steps and i down-steps inside [0, h].
/// Zero for h < 0.
BigInt catalan_prime(unsigned i, int h);

enum class GfFamily { plain, bounded, prime };

/// Generating functions evaluated at x = 1/4, three independent ways.
ExactRational gf_quarter_closed(GfFamily family, unsigned h);
ExactRational gf_quarter_recurrence(GfFamily family, unsigned h);
/// C_h(1/4) through U_h(1) / (U_{h+1}(1) / 2); C'_h as the running product
/// of those values. The plain family has no Chebyshev form and reuses the
/// h -> infinity limit 2.
ExactRational gf_quarter_chebyshev(GfFamily family, unsigned h);

/// Closed form after checking it against the recurrence and Chebyshev forms.
ExactRational gf_quarter(GfFamily family, unsigned h);

/// l_i(r): C_i / 2^{2i+1} for fixed-point r, C_{i,q-2} / 2^{2i+1} for p/q.
ExactRational predicted_level_fraction(unsigned i, const Scale& r);

// The swift prediction carries a 2^{q} denominator; larger q is refused.
inline constexpr std::uint64_t kMaxSwiftDenominator = std::uint64_t{1} << 16;

/// sw_i(p/q) = C'_{i,q-2} / 2^{2i+q-1}. Requires q >= 2 and gcd(p, q) = 1.
ExactRational predicted_swift_fraction(unsigned i, std::uint64_t p, std::uint64_t q);

/// 0 for fixed-point r, 1/q for p/q.
ExactRational predicted_periodic_fraction(const Scale& r);

/// binom(2N+2, N+1) / 4^{N+1}: the exact mass of sum_{i > N} C_i / 2^{2i+1}.
ExactRational level_tail_fixed(unsigned n_max);

}  // namespace cyclic
