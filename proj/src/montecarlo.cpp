#include "cyclic/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cyclic/catalan.hpp"
#include "cyclic/error.hpp"

namespace cyclic {

std::uint64_t TrialResult::lev_total() const noexcept {
  return std::accumulate(lev.begin(), lev.end(), std::uint64_t{0});
}

std::uint64_t TrialResult::swi_total() const noexcept {
  return std::accumulate(swi.begin(), swi.end(), std::uint64_t{0});
}

void Statistic::add(std::uint64_t x) noexcept {
  sum += x;
  sumsq += u128{x} * x;
  ++trials;
}

double Statistic::mean() const noexcept {
  if (trials == 0) return 0.0;
  return static_cast<double>(sum) / static_cast<double>(trials) / static_cast<double>(n);
}

double Statistic::sd() const noexcept {
  if (trials < 2) return 0.0;
  // T * sum(x^2) - (sum x)^2 is exact in 256 bits; 128 suffice for desk-scale runs.
  const BigInt t = trials;
  const BigInt spread = t * BigInt(sumsq) - BigInt(sum) * BigInt(sum);
  const double var = spread.convert_to<double>() / (static_cast<double>(trials) * static_cast<double>(trials - 1));
  return std::sqrt(std::max(0.0, var)) / static_cast<double>(n);
}

double Statistic::se() const noexcept {
  if (trials == 0) return 0.0;
  return sd() / std::sqrt(static_cast<double>(trials));
}

double Aggregate::single_orbit_frequency() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(single_orbit_trials) / static_cast<double>(trials);
}

double Aggregate::wf_bound_frequency() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(wf_bound_passes) / static_cast<double>(trials);
}

TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
  TrialResult out;
  out.trial = trial;
  out.trial_seed = stream_seed(cfg.seed, trial);
  RandomStream rng(out.trial_seed);
  const auto sys = build_map(sample_uniform(cfg.n, rng), cfg.r);
  const auto levels = periodic_and_levels(sys);
  out.per = levels.periodic_count;
  out.lev = levels.histogram.counts;
  if (cfg.stats.orbits || (cfg.stats.swift && cfg.r.is_rational())) {
    const auto orbits = orbit_report(sys, levels);
    out.has_orbits = true;
    out.orbit_count = orbits.orbit_count;
    out.ell = orbits.length;
    out.w = orbits.winding;
    if (cfg.stats.swift && cfg.r.is_rational()) {
      const auto swift = swiftness_types(sys, levels, orbits, cfg.i_max);
      out.has_swift = true;
      out.swi = swift.type_counts;
      out.untyped = swift.untyped;
      out.any_swift = swift.any_swift;
    }
  }
  return out;
}

Aggregate aggregate_results(const ExperimentConfig& cfg, const std::vector<TrialResult>& results) {
  Aggregate agg;
  agg.trials = results.size();
  auto stat = [&](const std::string& name) -> Statistic& {
    auto& s = agg.stats[name];
    s.n = cfg.n;
    return s;
  };
  const bool orbit_data = cfg.stats.orbits || (cfg.stats.swift && cfg.r.is_rational());
  agg.wf_bound_evaluated = cfg.n >= 3 && orbit_data;
  for (const auto& res : results) {
    if (res.per + res.lev_total() != cfg.n) {
      throw Error(Errc::invalid_argument, "trial " + std::to_string(res.trial) + " violates per + sum(lev) = n");
    }
    stat("per").add(res.per);
    if (cfg.stats.levels) {
      for (unsigned i = 0; i <= cfg.i_max; ++i) {
        stat("lev_" + std::to_string(i)).add(i < res.lev.size() ? res.lev[i] : 0);
      }
    }
    if (res.has_orbits) {
      stat("orbit_count").add(res.orbit_count);
      if (res.orbit_count == 1) ++agg.single_orbit_trials;
      if (agg.wf_bound_evaluated && wf_meets_bound(res.w, res.ell, cfg.n, cfg.r)) ++agg.wf_bound_passes;
    }
    if (res.has_swift) {
      for (unsigned i = 0; i <= cfg.i_max; ++i) {
        stat("swi_" + std::to_string(i)).add(i < res.swi.size() ? res.swi[i] : 0);
      }
      stat("swi_sum").add(res.swi_total());
      if (res.any_swift) {
        ++agg.swift_trials;
        const auto lhs = u128{res.ell} * cfg.r.p();
        const auto rhs = u128{res.w} * cfg.r.q();
        if (res.orbit_count == 1 && lhs == rhs + 1) ++agg.swift_identity_trials;
      }
    }
  }
  return agg;
}

Experiment run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw Error(Errc::invalid_argument, "trials must be at least 1");
  if (cfg.n == 0) throw Error(Errc::invalid_argument, "n must be at least 1");

  Experiment exp;
  exp.results.resize(cfg.trials);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::uint64_t error_trial = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr error;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const auto t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      try {
        exp.results[t] = run_trial(cfg, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (t < error_trial) {
          error_trial = t;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };

  const auto workers = static_cast<unsigned>(std::clamp<std::uint64_t>(cfg.workers, 1, cfg.trials));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  exp.aggregate = aggregate_results(cfg, exp.results);
  return exp;
}

namespace {

Comparison compare(const std::string& name, const Statistic& stat, const ExactRational& predicted) {
  Comparison c;
  c.statistic = name;
  c.observed = stat.mean();
  c.predicted = predicted;
  c.standard_error = stat.se();
  const double p = predicted.convert_to<double>();
  const double diff = c.observed - p;
  // Every trial gave the same count: fall back to the binomial error of the
  // predicted fraction over all n * trials points.
  if (c.standard_error == 0.0 && stat.trials > 0) {
    const double points = static_cast<double>(stat.n) * static_cast<double>(stat.trials);
    c.standard_error = std::sqrt(std::max(0.0, p * (1.0 - p)) / points);
  }
  if (c.standard_error > 0.0) {
    c.z = diff / c.standard_error;
  } else {
    c.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  c.flagged = std::abs(c.z) > kSigmaRule;
  return c;
}

}  // namespace

std::vector<Comparison> compare_with_theory(const Aggregate& agg, const Scale& r, unsigned i_max) {
  std::vector<Comparison> rows;
  if (auto it = agg.stats.find("per"); it != agg.stats.end()) {
    rows.push_back(compare("per", it->second, predicted_periodic_fraction(r)));
  }
  for (unsigned i = 0; i <= i_max; ++i) {
    const auto name = "lev_" + std::to_string(i);
    if (auto it = agg.stats.find(name); it != agg.stats.end()) {
      rows.push_back(compare(name, it->second, predicted_level_fraction(i, r)));
    }
  }
  const bool swift_predictable = r.is_rational() && r.q() >= 2 && r.q() <= kMaxSwiftDenominator;
  if (swift_predictable) {
    for (unsigned i = 0; i <= i_max; ++i) {
      const auto name = "swi_" + std::to_string(i);
      if (auto it = agg.stats.find(name); it != agg.stats.end()) {
        rows.push_back(compare(name, it->second, predicted_swift_fraction(i, r.p(), r.q())));
      }
    }
    if (auto it = agg.stats.find("swi_sum"); it != agg.stats.end()) {
      rows.push_back(compare("swi_sum", it->second, ExactRational(BigInt(1), BigInt(r.q()))));
    }
  }
  return rows;
}

bool wf_meets_bound(std::uint64_t w, std::uint64_t ell, std::uint64_t n, const Scale& r) {
  using Float = boost::multiprecision::cpp_bin_float_100;
  if (ell == 0) return false;
  const Float margin("1e-80");
  Float radius;
  if (r.is_rational()) {
    radius = Float(r.p()) / Float(r.q());
  } else {
    radius = Float(r.as_fixed().num) / Float(kFullTurn);
  }
  const Float nn(n);
  const Float threshold_hi = radius - 2 * boost::multiprecision::log(nn) / nn + margin;
  const Float wf_lo = Float(w) / Float(ell) - margin;
  return wf_lo >= threshold_hi;
}

double WfBoundResult::frequency() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(passes) / static_cast<double>(trials);
}

WfBoundResult wf_bound_check(const std::vector<TrialResult>& results, std::uint64_t n, const Scale& r) {
  WfBoundResult out;
  if (n < 3) return out;
  out.evaluated = true;
  for (const auto& res : results) {
    if (!res.has_orbits) throw Error(Errc::invalid_argument, "wf bound needs orbit statistics");
    ++out.trials;
    if (wf_meets_bound(res.w, res.ell, n, r)) ++out.passes;
  }
  return out;
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(Errc::invalid_argument, "slope fit needs at least two paired points");
  }
  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k] <= 0 || ys[k] <= 0) throw Error(Errc::invalid_argument, "log-log fit needs positive data");
    sx += std::log(xs[k]);
    sy += std::log(ys[k]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = std::log(xs[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[k]) - my);
  }
  if (sxx == 0) throw Error(Errc::invalid_argument, "slope fit needs distinct x values");
  return sxy / sxx;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::invalid_argument, "median of empty data");
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

GrowthFit growth_exponent(const Scale& r, const std::vector<std::uint64_t>& n_grid, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers) {
  if (n_grid.size() < 3 || !std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
    throw Error(Errc::invalid_argument, "growth fit needs at least three increasing sizes");
  }
  GrowthFit fit;
  fit.n_grid = n_grid;
  std::vector<double> xs;
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    ExperimentConfig cfg;
    cfg.n = n_grid[k];
    cfg.r = r;
    cfg.trials = trials;
    cfg.seed = stream_seed(seed, k);
    cfg.stats = StatisticFlags{false, false, false};
    cfg.workers = workers;
    const auto exp = run_experiment(cfg);
    std::vector<double> pers;
    for (const auto& res : exp.results) pers.push_back(static_cast<double>(res.per));
    fit.median_per.push_back(median(std::move(pers)));
    xs.push_back(static_cast<double>(n_grid[k]));
  }
  fit.slope = fit_loglog_slope(xs, fit.median_per);
  return fit;
}

}  // namespace cyclic
