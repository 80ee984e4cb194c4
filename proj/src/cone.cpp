#include "cyclic/cone.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "cyclic/error.hpp"

namespace cyclic {

const char* family_name(ConeFamily family) noexcept {
  switch (family) {
    case ConeFamily::K: return "K";
    case ConeFamily::Kq: return "Kq";
    case ConeFamily::S: return "S";
  }
  return "?";
}

ConeFamily parse_family(const std::string& text) {
  if (text == "K") return ConeFamily::K;
  if (text == "Kq") return ConeFamily::Kq;
  if (text == "S") return ConeFamily::S;
  throw Error(Errc::invalid_argument, "unknown cone family '" + text + "' (expected K, Kq or S)");
}

ConeSpec build_cone(ConeFamily family, unsigned i, std::optional<unsigned> q) {
  ConeSpec spec;
  spec.family = family;
  spec.i = i;
  if (family != ConeFamily::K) {
    if (!q) throw Error(Errc::missing_q, std::string(family_name(family)) + " cone needs q");
    if (*q < 2) throw Error(Errc::invalid_argument, "q must be at least 2");
    spec.q = q;
  }
  auto add = [&](unsigned j, unsigned k, bool negated) { spec.inequalities.push_back({j, k, negated}); };

  if (family == ConeFamily::S) {
    const unsigned qq = *q;
    spec.half_z = i + qq - 1;
    for (unsigned j = 1; j <= i + qq - 1; ++j) add(j, j, false);
    for (unsigned j = 1; j <= i; ++j) add(j, j + qq - 2, true);
    add(i + 1, i + qq - 1, false);
    return spec;
  }

  spec.half_z = i + 1;
  for (unsigned j = 1; j <= i; ++j) add(j, j, false);
  add(i + 1, i + 1, true);
  if (family == ConeFamily::Kq) {
    const unsigned qq = *q;
    // Second row: not H(j, j + q - 2) for j = 1..i - q + 2; empty when i <= q - 2.
    for (unsigned j = 1; j + qq <= i + 2; ++j) add(j, j + qq - 2, true);
  }
  return spec;
}

bool contains(const ConeSpec& spec, std::span<const double> u) {
  if (u.size() != spec.dim()) {
    throw Error(Errc::dimension_mismatch, "vector of length " + std::to_string(u.size()) +
                                              " for cone of dimension " + std::to_string(spec.dim()));
  }
  const auto half = spec.half_z;
  std::vector<double> zsum(half + 1, 0.0);
  std::vector<double> wsum(half + 1, 0.0);
  for (unsigned j = 0; j < half; ++j) {
    zsum[j + 1] = zsum[j] + u[j];
    wsum[j + 1] = wsum[j] + u[half + j];
  }
  for (const auto& h : spec.inequalities) {
    const bool holds = zsum[h.j] >= wsum[h.k];
    if (holds == h.negated) return false;
  }
  return true;
}

double standard_exponential(RandomStream& rng) {
  // 1 - U = (2^64 - tick) / 2^64 lies in (0, 1], so the logarithm is finite.
  const std::uint64_t tick = rng();
  const double complement = tick == 0 ? 0x1p64 : static_cast<double>(std::uint64_t{0} - tick);
  return -(std::log(complement) - 64.0 * std::log(2.0));
}

McEstimate mc_integral(const ConeSpec& spec, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  if (samples == 0) throw Error(Errc::invalid_argument, "need at least one sample");
  const std::uint64_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  std::atomic<std::uint64_t> next_chunk{0};

  auto work = [&] {
    std::vector<double> u(spec.dim());
    for (;;) {
      const auto c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      auto rng = make_stream(seed, c);
      const auto count = std::min(kMcChunk, samples - c * kMcChunk);
      std::uint64_t local = 0;
      for (std::uint64_t s = 0; s < count; ++s) {
        for (auto& x : u) x = standard_exponential(rng);
        if (contains(spec, u)) ++local;
      }
      hits[c] = local;
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  McEstimate est;
  est.samples = samples;
  for (auto h : hits) est.hits += h;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.standard_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(samples));
  return est;
}

McEstimate mc_integral(const ConeSpec& spec, std::uint64_t samples, RandomStream& rng) {
  return mc_integral(spec, samples, rng(), 1);
}

namespace {

// Linear extensions of the poset on s_1..s_a (ids 0..a-1) and t_1..t_a
// (ids a..2a-1) after the substitution s_j = z_1 + .. + z_j, t_k = w_1 + .. + w_k.
class ExtensionCounter {
 public:
  explicit ExtensionCounter(const ConeSpec& spec)
      : size_(2 * spec.half_z), s_top_(spec.half_z - 1), t_top_(2 * spec.half_z - 1),
        preds_(size_, 0), by_position_(size_ + 1, 0) {
    const unsigned a = spec.half_z;
    for (unsigned j = 1; j < a; ++j) {
      preds_[j] |= bit(j - 1);
      preds_[a + j] |= bit(a + j - 1);
    }
    for (const auto& h : spec.inequalities) {
      const unsigned s = h.j - 1;
      const unsigned t = a + h.k - 1;
      if (h.negated) {
        preds_[t] |= bit(s);  // s_j < t_k
      } else {
        preds_[s] |= bit(t);  // t_k <= s_j
      }
    }
  }

  void run() { extend(0, 0, 0); }

  // by_position()[m]: extensions whose first-placed chain top is at position m.
  const std::vector<std::uint64_t>& by_position() const noexcept { return by_position_; }

 private:
  static std::uint32_t bit(unsigned id) { return std::uint32_t{1} << id; }

  void extend(std::uint32_t placed, unsigned position, unsigned top_position) {
    if (position == size_) {
      ++by_position_[top_position];
      return;
    }
    for (unsigned v = 0; v < size_; ++v) {
      if ((placed & bit(v)) || (preds_[v] & ~placed)) continue;
      unsigned top = top_position;
      if ((v == s_top_ || v == t_top_) && top == 0) top = position + 1;
      extend(placed | bit(v), position + 1, top);
    }
  }

  unsigned size_;
  unsigned s_top_;
  unsigned t_top_;
  std::vector<std::uint32_t> preds_;
  std::vector<std::uint64_t> by_position_;
};

ExtensionCounter run_counter(const ConeSpec& spec) {
  if (spec.half_z > kMaxExactHalfZ) {
    throw Error(Errc::too_large, "exact integration supports half_z <= " + std::to_string(kMaxExactHalfZ) +
                                     ", got " + std::to_string(spec.half_z));
  }
  for (const auto& h : spec.inequalities) {
    if (h.j < 1 || h.k < 1 || h.j > spec.half_z || h.k > spec.half_z) {
      throw Error(Errc::dimension_mismatch, "inequality index outside the cone");
    }
  }
  ExtensionCounter counter(spec);
  counter.run();
  return counter;
}

}  // namespace

ExactRational exact_integral(const ConeSpec& spec) {
  const auto counter = run_counter(spec);
  ExactRational total = 0;
  const auto& counts = counter.by_position();
  for (std::size_t m = 1; m < counts.size(); ++m) {
    if (counts[m] != 0) total += ExactRational(BigInt(counts[m])) / pow2(static_cast<int>(m));
  }
  return total;
}

std::uint64_t count_linear_extensions(const ConeSpec& spec) {
  const auto counter = run_counter(spec);
  std::uint64_t total = 0;
  for (auto c : counter.by_position()) total += c;
  return total;
}

}  // namespace cyclic
