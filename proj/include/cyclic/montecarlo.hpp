#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclic/circle.hpp"
#include "cyclic/dynamics.hpp"
#include "cyclic/exact.hpp"

namespace cyclic {

struct StatisticFlags {
  bool levels = true;
  bool orbits = true;
  bool swift = true;  // only meaningful for rational r
};

struct ExperimentConfig {
  std::uint64_t n = 1;
  Scale r = Scale::rational(1, 2);
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned i_max = kDefaultIMax;
  StatisticFlags stats;
  unsigned workers = 1;
};

struct TrialResult {
  std::uint64_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::uint64_t per = 0;
  std::vector<std::uint64_t> lev;  // full level histogram
  bool has_orbits = false;
  std::uint64_t orbit_count = 0;
  std::uint64_t ell = 0;
  std::uint64_t w = 0;
  bool has_swift = false;
  std::vector<std::uint64_t> swi;  // types 0..i_max
  std::uint64_t untyped = 0;
  bool any_swift = false;

  std::uint64_t lev_total() const noexcept;
  std::uint64_t swi_total() const noexcept;
  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Sum and sum of squares of an integer per-trial count; moments are formed
/// once, from exact totals, so the order of accumulation is irrelevant.
struct Statistic {
  u128 sum = 0;
  u128 sumsq = 0;
  std::uint64_t trials = 0;
  std::uint64_t n = 1;  // counts are reported as fractions of n

  void add(std::uint64_t x) noexcept;
  double mean() const noexcept;
  double sd() const noexcept;
  double se() const noexcept;
  friend bool operator==(const Statistic&, const Statistic&) = default;
};

struct Aggregate {
  std::map<std::string, Statistic> stats;  // "per", "lev_i", "swi_i", "swi_sum", "orbit_count"
  std::uint64_t trials = 0;
  std::uint64_t single_orbit_trials = 0;
  std::uint64_t swift_trials = 0;           // trials with at least one swift point
  std::uint64_t swift_identity_trials = 0;  // ... where l p - w q = 1 holds
  bool wf_bound_evaluated = false;
  std::uint64_t wf_bound_passes = 0;

  double single_orbit_frequency() const noexcept;
  double wf_bound_frequency() const noexcept;
  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

/// One sampled system analysed according to the config.
TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial);

Aggregate aggregate_results(const ExperimentConfig& cfg, const std::vector<TrialResult>& results);

struct Experiment {
  std::vector<TrialResult> results;
  Aggregate aggregate;
};

/// Trial t samples from stream (seed, t). Results and aggregate are identical
/// for any worker count. The first failing trial aborts the run.
Experiment run_experiment(const ExperimentConfig& cfg);

struct Comparison {
  std::string statistic;
  double observed = 0.0;
  ExactRational predicted;
  double standard_error = 0.0;  // binomial fallback when every trial agrees
  double z = 0.0;
  bool flagged = false;  // |z| > 4
};

inline constexpr double kSigmaRule = 4.0;

/// z-scores against every closed-form prediction available for r.
std::vector<Comparison> compare_with_theory(const Aggregate& agg, const Scale& r, unsigned i_max);

/// wf >= r - 2 ln(n) / n, with the threshold rounded upward so that rounding
/// can never turn a failure into a pass.
bool wf_meets_bound(std::uint64_t w, std::uint64_t ell, std::uint64_t n, const Scale& r);

struct WfBoundResult {
  bool evaluated = false;  // false when n < 3
  std::uint64_t passes = 0;
  std::uint64_t trials = 0;
  double frequency() const noexcept;
};

WfBoundResult wf_bound_check(const std::vector<TrialResult>& results, std::uint64_t n, const Scale& r);

/// Least-squares slope of log y against log x.
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

double median(std::vector<double> values);

struct GrowthFit {
  std::vector<std::uint64_t> n_grid;
  std::vector<double> median_per;
  double slope = 0.0;
};

/// Median periodic count at each n and the log-log slope through them.
GrowthFit growth_exponent(const Scale& r, const std::vector<std::uint64_t>& n_grid, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers = 1);

}  // namespace cyclic
