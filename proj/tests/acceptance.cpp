// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_set>

#include "cyclic/catalan.hpp"
#include "cyclic/cone.hpp"
#include "cyclic/dynamics.hpp"
#include "cyclic/montecarlo.hpp"
#include "cyclic/vr.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cyclic;
using testing_support::ticks_of;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

double to_double(const ExactRational& x) { return x.convert_to<double>(); }

ExactRational pow2_inv(unsigned e) { return ExactRational(BigInt(1), BigInt(1) << e); }

BigInt paths(unsigned ups, unsigned downs, int h) { return BigInt(oracle::count_paths(ups, downs, h)); }

// |mean - target| within 4 standard errors.
bool within_4se(const Statistic& s, double target, double* z_out = nullptr) {
  const double se = s.se();
  const double diff = s.mean() - target;
  const double z = se > 0 ? diff / se : (diff == 0 ? 0.0 : INFINITY);
  if (z_out) *z_out = z;
  return std::abs(z) < 4.0;
}

Experiment experiment(std::uint64_t n, const Scale& r, std::uint64_t trials, std::uint64_t seed, bool swift,
                      bool orbits = true) {
  ExperimentConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.i_max = 8;
  cfg.stats.levels = true;
  cfg.stats.orbits = orbits;
  cfg.stats.swift = swift;
  return run_experiment(cfg);
}

void criterion1(Verdict& v) {
  unsigned checked = 0;
  for (unsigned i = 0; i <= 6; ++i) {
    const auto k = exact_integral(build_cone(ConeFamily::K, i));
    v.require(k == ExactRational(paths(i, i, static_cast<int>(2 * i))) * pow2_inv(2 * i + 1),
              "K_" + std::to_string(i));
    ++checked;
    for (unsigned q = 2; q <= 6; ++q) {
      const int h = static_cast<int>(q) - 2;
      const auto kq = exact_integral(build_cone(ConeFamily::Kq, i, q));
      v.require(kq == ExactRational(paths(i, i, h)) * pow2_inv(2 * i + 1),
                "K_" + std::to_string(i) + "(" + std::to_string(q) + ")");
      const auto s = exact_integral(build_cone(ConeFamily::S, i, q));
      v.require(s == ExactRational(paths(i + h, i, h)) * pow2_inv(2 * i + q - 1),
                "S_" + std::to_string(i) + "(" + std::to_string(q) + ")");
      checked += 2;
    }
  }
  v.detail << checked << " cone integrals equal path-count formulas";
}

void criterion2(Verdict& v) {
  for (unsigned i = 0; i <= 10; ++i) {
    for (int h = 0; h <= 6; ++h) {
      v.require(catalan_bounded(i, h) == paths(i, i, h), "C_{" + std::to_string(i) + "," + std::to_string(h) + "}");
      v.require(catalan_prime(i, h) == paths(i + static_cast<unsigned>(h), i, h),
                "C'_{" + std::to_string(i) + "," + std::to_string(h) + "}");
    }
  }
  for (unsigned h = 0; h <= 64; ++h) {
    for (auto family : {GfFamily::plain, GfFamily::bounded, GfFamily::prime}) {
      const auto closed = gf_quarter_closed(family, h);
      v.require(closed == gf_quarter_recurrence(family, h) && closed == gf_quarter_chebyshev(family, h),
                "gf h=" + std::to_string(h));
    }
    v.require(gf_quarter_closed(GfFamily::bounded, h) == ExactRational(2 * (h + 1), h + 2),
              "C_h(1/4) value h=" + std::to_string(h));
  }
  v.detail << "i<=10, h<=6 enumeration; gf h<=64 three ways";
}

void criterion3(Verdict& v) {
  for (auto [p, q] : {std::pair{1u, 3u}, std::pair{5u, 23u}}) {
    const auto exp = experiment(20000, Scale::rational(p, q), 200, kSeed + q, false, false);
    const auto& per = exp.aggregate.stats.at("per");
    const double target = 1.0 / q;
    double z = 0;
    const bool ok = within_4se(per, target, &z);
    v.require(ok, "z vs 1/" + std::to_string(q));
    if (q == 3) v.require(std::abs(per.mean() - target) <= 0.02, "mean within 0.02");
    v.detail << "r=" << p << "/" << q << ": per/n=" << per.mean() << " z=" << z << (q == 3 ? "; " : "");
  }
}

void criterion4(Verdict& v) {
  {
    const auto exp = experiment(20000, Scale::parse("fixed:0.6180339887"), 200, kSeed + 4, false, false);
    const double target[] = {1.0 / 2, 1.0 / 8, 1.0 / 16, 5.0 / 128};
    double worst = 0;
    for (unsigned i = 0; i < 4; ++i) {
      double z = 0;
      v.require(within_4se(exp.aggregate.stats.at("lev_" + std::to_string(i)), target[i], &z),
                "fixed lev_" + std::to_string(i));
      worst = std::max(worst, std::abs(z));
    }
    v.detail << "fixed golden max|z|=" << worst << "; ";
  }
  {
    const auto exp = experiment(20000, Scale::rational(2, 5), 200, kSeed + 5, false, false);
    double worst = 0;
    for (unsigned i = 0; i <= 5; ++i) {
      const double target = to_double(ExactRational(paths(i, i, 3)) * pow2_inv(2 * i + 1));
      double z = 0;
      v.require(within_4se(exp.aggregate.stats.at("lev_" + std::to_string(i)), target, &z),
                "2/5 lev_" + std::to_string(i));
      worst = std::max(worst, std::abs(z));
    }
    v.detail << "r=2/5 max|z|=" << worst;
  }
}

void criterion5(Verdict& v) {
  const auto exp = experiment(10000, Scale::rational(1, 3), 200, kSeed + 6, true);
  std::uint64_t single = 0, identity = 0, swift = 0, swift_ok = 0;
  for (const auto& t : exp.results) {
    if (t.orbit_count == 1) {
      ++single;
      if (t.ell * 1 == t.w * 3 + 1) ++identity;
    }
    if (t.any_swift) {
      ++swift;
      if (t.orbit_count == 1 && t.ell * 1 == t.w * 3 + 1) ++swift_ok;
    }
  }
  v.require(single * 100 >= 99 * exp.results.size(), "single orbit in 99%");
  v.require(identity == single, "l - 3w = 1 in single-orbit trials");
  v.require(swift_ok == swift, "swift trials satisfy l p - w q = 1");
  v.require(exp.aggregate.swift_identity_trials == exp.aggregate.swift_trials, "aggregate swift identity");
  v.detail << single << "/" << exp.results.size() << " single-orbit, identity " << identity << "/" << single
           << ", swift trials " << swift_ok << "/" << swift;
}

void criterion6(Verdict& v) {
  const auto exp = experiment(10000, Scale::rational(1, 2), 200, kSeed + 7, true, false);
  double z0 = 0, zs = 0;
  v.require(within_4se(exp.aggregate.stats.at("swi_0"), 0.5, &z0), "swi_0");
  v.require(within_4se(exp.aggregate.stats.at("swi_sum"), 0.5, &zs), "swi_sum");
  v.detail << "swi_0/n=" << exp.aggregate.stats.at("swi_0").mean() << " z=" << z0
           << "; sum/n=" << exp.aggregate.stats.at("swi_sum").mean() << " z=" << zs;
}

void criterion7(Verdict& v) {
  const auto r = Scale::rational(1, 2);
  auto rng = make_stream(kSeed + 8, 0);
  unsigned samples = 0, rejected = 0;
  while (samples < 100) {
    const std::size_t n = 1 + rng() % 200;
    const auto points = sample_uniform(n, rng);
    std::unordered_set<Tick> ticks(points.ticks().begin(), points.ticks().end());
    const bool antipodal = std::any_of(points.ticks().begin(), points.ticks().end(),
                                       [&](Tick t) { return ticks.count(t + (Tick{1} << 63)) > 0; });
    if (antipodal) {
      ++rejected;
      continue;
    }
    ++samples;
    const auto sys = build_map(points, r);
    const auto hist = periodic_and_levels(sys).histogram;
    for (std::size_t i = 1; i < hist.counts.size(); ++i) v.require(hist.counts[i] == 0, "library level > 0");
    const auto lev = oracle::levels(oracle::map(ticks_of(points), r));
    for (std::size_t i = 1; i < lev.size(); ++i) v.require(lev[i] == 0, "oracle level > 0");
  }
  v.detail << samples << " samples, " << rejected << " rejected for antipodal pairs";
}

void criterion8(Verdict& v) {
  const std::uint64_t n = 1000;
  const auto r = Scale::rational(1, 3);
  const auto exp = experiment(n, r, 1000, kSeed + 9, false);
  const auto check = wf_bound_check(exp.results, n, r);
  const long double bound = 1.0L / 3 - 2 * std::log(static_cast<long double>(n)) / n;
  std::uint64_t independent = 0;
  for (const auto& t : exp.results) {
    if (static_cast<long double>(t.w) / t.ell >= bound) ++independent;
  }
  v.require(check.evaluated, "bound evaluated");
  v.require(check.frequency() >= 0.99, "frequency >= 0.99");
  v.require(independent == check.passes, "long double recount agrees");
  v.detail << "frequency " << check.frequency() << " (" << check.passes << "/" << check.trials << ")";
}

void criterion9(Verdict& v) {
  const auto fit = growth_exponent(Scale::parse("fixed:0.41421356237"), {1000, 10000, 100000}, 50, kSeed + 10);
  v.require(fit.slope >= 0.3 && fit.slope <= 0.7, "slope in [0.3, 0.7]");
  for (std::size_t k = 1; k < fit.n_grid.size(); ++k) {
    v.require(fit.median_per[k] / fit.n_grid[k] < fit.median_per[k - 1] / fit.n_grid[k - 1], "per/n decreasing");
  }
  v.detail << "median per";
  for (std::size_t k = 0; k < fit.n_grid.size(); ++k) v.detail << " " << fit.n_grid[k] << ":" << fit.median_per[k];
  v.detail << "; slope=" << fit.slope;
}

void criterion10(Verdict& v) {
  const std::size_t n = 1000;
  {
    const auto r = Scale::rational(1, 3);
    Statistic core;
    core.n = n;
    std::uint64_t equal = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      auto rng = make_stream(kSeed + 11, t);
      const auto points = sample_uniform(n, rng);
      auto dismantled = dismantle_to_core(build_graph(points, r)).core;
      auto periodic = orbit_report(build_map(points, r)).periodic_indices;
      std::sort(dismantled.begin(), dismantled.end());
      std::sort(periodic.begin(), periodic.end());
      if (dismantled == periodic) ++equal;
      core.add(dismantled.size());
    }
    double z = 0;
    v.require(equal == 100, "core equals periodic set");
    v.require(within_4se(core, 1.0 / 3, &z), "mean core size");
    v.detail << "r=1/3: core==periodic " << equal << "/100, core/n=" << core.mean() << " z=" << z << "; ";
  }
  {
    const auto r = Scale::rational(3, 10);
    const unsigned dim = 2 * static_cast<unsigned>(std::ceil(0.3 / (1 - 2 * 0.3))) - 1;
    std::uint64_t circles = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      auto rng = make_stream(kSeed + 12, t);
      const auto res = analyze_vr(sample_uniform(n, rng), r);
      if (res.homotopy.kind == HomotopyType::Kind::odd_sphere && res.homotopy.dim == dim) ++circles;
    }
    v.require(dim == 1 && expected_sphere_dimension(r) == dim, "expected dimension 1");
    v.require(circles >= 99, "S^1 in 99%");
    v.detail << "r=3/10: S^" << dim << " in " << circles << "/100";
  }
}

void criterion11(Verdict& v) {
  auto rng = make_stream(kSeed + 13, 0);
  const auto scales = testing_support::small_scales();
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 100;
    Scale r = scales[rng() % scales.size()];
    if (trial % 2 == 1) {
      const std::uint64_t q = 1 + rng() % 50;
      const std::uint64_t p = 1 + rng() % q;
      const std::uint64_t g = std::gcd(p, q);
      r = Scale::rational(p / g, q / g);
    }
    const auto points = trial % 3 == 0 ? testing_support::grid_sample(std::min<std::size_t>(n, 64), rng)
                                       : sample_uniform(n, rng);
    const auto sys = build_map(points, r);
    const auto f = oracle::map(ticks_of(points), r);
    const auto per = oracle::periodic(f);
    const auto got = periodic_and_levels(sys);
    for (Index i = 0; i < sys.size(); ++i) {
      v.require(sys.succ(i) == f[i], "build_map");
      v.require(static_cast<bool>(got.periodic[i]) == per[i], "periodic set");
    }
  }
  unsigned regular = 0;
  for (std::uint32_t n = 1; n <= 12; ++n) {
    for (std::uint32_t k = 0; k < n; ++k) {
      const auto sys = make_regular(n, k);
      const auto rep = orbit_report(sys);
      const std::uint64_t d = std::gcd(k, n);
      v.require(rep.orbit_count == d && rep.length == n / d && rep.winding == k / d,
                "Reg_" + std::to_string(n) + "^" + std::to_string(k));
      const auto brute = oracle::orbits(ticks_of(sys.points()), oracle::map(ticks_of(sys.points()), sys.scale()));
      v.require(brute.count == d && brute.shapes == std::set<std::pair<std::uint64_t, std::uint64_t>>{{n / d, k / d}},
                "Reg oracle " + std::to_string(n) + "^" + std::to_string(k));
      ++regular;
    }
  }
  v.detail << "200 random systems; " << regular << " regular systems";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
      {"exact cone integrals", criterion1},     {"combinatorics vs enumeration", criterion2},
      {"periodic fraction", criterion3},        {"level fractions", criterion4},
      {"single orbit", criterion5},             {"swiftness types", criterion6},
      {"r=1/2 rigidity", criterion7},           {"wf lower bound", criterion8},
      {"growth exponent", criterion9},          {"VR core", criterion10},
      {"brute-force equivalence", criterion11},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.failures += std::string(" [exception: ") + e.what() + "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s%s (%.1fs)\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.str().c_str(),
                v.failures.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
