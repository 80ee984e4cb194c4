#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclic/exact.hpp"
#include "cyclic/rng.hpp"

namespace cyclic {

enum class ConeFamily { K, Kq, S };

const char* family_name(ConeFamily family) noexcept;
ConeFamily parse_family(const std::string& text);

/// H(j, k): z_1 + ... + z_j >= w_1 + ... + w_k, or its strict negation.
struct Inequality {
  unsigned j = 1;
  unsigned k = 1;
  bool negated = false;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// A cone in R^{2 half_z}_+ with coordinates u = (z_1.., w_1..).
struct ConeSpec {
  ConeFamily family = ConeFamily::K;
  unsigned i = 0;
  std::optional<unsigned> q;
  unsigned half_z = 1;
  std::vector<Inequality> inequalities;

  unsigned dim() const noexcept { return 2 * half_z; }
};

/// K_i, K_i(q) or S_i(q). Kq and S need q >= 2.
ConeSpec build_cone(ConeFamily family, unsigned i, std::optional<unsigned> q = std::nullopt);

/// Every inequality holds at u; negated ones strictly.
bool contains(const ConeSpec& spec, std::span<const double> u);

/// Standard exponential variate by inversion of one 64-bit uniform draw.
double standard_exponential(RandomStream& rng);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

inline constexpr std::uint64_t kMcChunk = 1 << 16;

/// P[(T_1, ..., T_m) in cone] for iid standard exponentials, which equals the
/// integral of exp(-|u|_1) over the cone. Chunk c of kMcChunk samples draws
/// from stream (seed, c), so the estimate is independent of `workers`.
McEstimate mc_integral(const ConeSpec& spec, std::uint64_t samples, std::uint64_t seed,
                       unsigned workers = 1);
McEstimate mc_integral(const ConeSpec& spec, std::uint64_t samples, RandomStream& rng);

inline constexpr unsigned kMaxExactHalfZ = 12;

/// Exact integral by enumerating linear extensions of the prefix-sum chain
/// poset; an extension whose second-largest chain top sits at position m
/// contributes 2^{-m}. Throws TooLarge when half_z > kMaxExactHalfZ.
ExactRational exact_integral(const ConeSpec& spec);

/// Number of linear extensions of that poset (unweighted).
std::uint64_t count_linear_extensions(const ConeSpec& spec);

}  // namespace cyclic
