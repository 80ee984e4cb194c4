#include "cyclic/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "cyclic/catalan.hpp"
#include "cyclic/cone.hpp"
#include "cyclic/error.hpp"
#include "cyclic/io.hpp"
#include "cyclic/montecarlo.hpp"
#include "cyclic/rng.hpp"
#include "cyclic/vr.hpp"

namespace cyclic::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scale parse_scale_flag(const std::string& flag, const std::string& text) {
  try {
    return Scale::parse(text);
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

std::string one_line(std::string text) {
  for (auto& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

std::string fixed_double(double x, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

struct SimulateArgs {
  std::uint64_t n = 0;
  std::string r;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned i_max = kDefaultIMax;
  std::string out;
  std::string format = "json";
  unsigned workers = 1;
  bool no_rows = false;
  bool no_timestamp = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  require(a.n >= 1, "--n: must be at least 1");
  require(a.trials >= 1, "--trials: must be at least 1");
  require(a.workers >= 1, "--workers: must be at least 1");
  require(a.format == "json" || a.format == "csv", "--format: expected json or csv");
  ExperimentConfig cfg;
  cfg.n = a.n;
  cfg.r = parse_scale_flag("--r", a.r);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.i_max = a.i_max;
  cfg.workers = a.workers;
  cfg.stats.swift = cfg.r.is_rational();

  const auto exp = run_experiment(cfg);
  std::string body;
  if (a.format == "csv") {
    body = experiment_to_csv(cfg, exp.results);
  } else {
    body = experiment_to_json(cfg, exp, !a.no_rows, a.no_timestamp ? "" : utc_timestamp()).dump() + "\n";
  }
  if (a.out.empty()) {
    out << body;
    return kExitOk;
  }
  std::ofstream file(a.out, std::ios::binary);
  if (!file) throw Error(Errc::invalid_argument, "cannot open '" + a.out + "' for writing");
  file << body;
  file.close();
  if (!file) throw Error(Errc::invalid_argument, "failed writing '" + a.out + "'");
  const auto& per = exp.aggregate.stats.at("per");
  out << "wrote " << a.out << ": n=" << cfg.n << " r=" << cfg.r.to_string() << " trials=" << cfg.trials
      << " seed=" << cfg.seed << " mean per/n=" << fixed_double(per.mean()) << "\n";
  return kExitOk;
}

int cmd_theory(const std::string& r_text, unsigned i_max, const std::string& format, std::ostream& out) {
  require(format == "text" || format == "json", "--format: expected text or json");
  const auto r = parse_scale_flag("--r", r_text);
  const bool swift = r.is_rational() && r.q() >= 2 && r.q() <= kMaxSwiftDenominator;
  const auto per = predicted_periodic_fraction(r);

  std::vector<ExactRational> lev, swi;
  ExactRational lev_sum = 0, swi_sum = 0;
  for (unsigned i = 0; i <= i_max; ++i) {
    lev.push_back(predicted_level_fraction(i, r));
    lev_sum += lev.back();
    if (swift) {
      swi.push_back(predicted_swift_fraction(i, r.p(), r.q()));
      swi_sum += swi.back();
    }
  }

  if (format == "json") {
    Json doc{{"schema", kSchema}, {"kind", "theory"}, {"r", to_json(r)}, {"i_max", i_max}, {"per", to_json(per)}};
    Json rows = Json::array();
    for (unsigned i = 0; i <= i_max; ++i) {
      Json row{{"i", i}, {"lev", to_json(lev[i])}};
      if (swift) row["swi"] = to_json(swi[i]);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    doc["lev_sum"] = to_json(lev_sum);
    if (swift) doc["swi_sum"] = to_json(swi_sum);
    out << doc.dump(2) << "\n";
    return kExitOk;
  }

  out << "r = " << r.to_string();
  if (!r.is_rational()) out << " (" << fixed_double(r.to_double(), 12) << ")";
  out << "\nper = " << to_string(per) << "\n";
  out << std::left << std::setw(4) << "i" << std::setw(28) << "lev_i/n" << (swift ? "swi_i/n" : "") << "\n";
  for (unsigned i = 0; i <= i_max; ++i) {
    out << std::setw(4) << i << std::setw(28) << to_string(lev[i]);
    if (swift) out << to_string(swi[i]);
    out << "\n";
  }
  out << "sum lev_i, i<=" << i_max << " = " << fixed_double(lev_sum.convert_to<double>(), 12) << "\n";
  if (swift) {
    out << "sum swi_i, i<=" << i_max << " = " << fixed_double(swi_sum.convert_to<double>(), 12) << "\n";
  } else {
    out << "swi_i: inapplicable for this r\n";
  }
  return kExitOk;
}

int cmd_catalan(const std::string& family, unsigned i, std::optional<int> h, std::ostream& out) {
  if (family == "C") {
    out << to_string(catalan(i)) << "\n";
    return kExitOk;
  }
  require(family == "Cb" || family == "Cp", "--family: expected C, Cb or Cp");
  require(h.has_value(), "--h: required for family " + family);
  out << to_string(family == "Cb" ? catalan_bounded(i, *h) : catalan_prime(i, *h)) << "\n";
  return kExitOk;
}

struct ConeArgs {
  std::string family;
  unsigned i = 0;
  std::optional<unsigned> q;
  std::uint64_t samples = 0;
  bool exact = false;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

int cmd_cone(const ConeArgs& a, std::ostream& out) {
  ConeFamily family;
  try {
    family = parse_family(a.family);
  } catch (const Error& e) {
    throw UsageError(std::string("--family: ") + e.what());
  }
  require(family == ConeFamily::K || a.q.has_value(), "--q: required for family " + a.family);
  require(!a.q || *a.q >= 2, "--q: must be at least 2");
  require(a.exact || a.samples > 0, "--exact or --samples: at least one is required");
  require(a.workers >= 1, "--workers: must be at least 1");
  const auto spec = build_cone(family, a.i, family == ConeFamily::K ? std::nullopt : a.q);

  Json doc{{"schema", kSchema}, {"kind", "cone"}, {"family", family_name(family)}, {"i", a.i}};
  doc["q"] = spec.q ? Json(*spec.q) : Json(nullptr);
  doc["dim"] = spec.dim();
  if (a.exact) doc["exact"] = to_json(exact_integral(spec));
  if (a.samples > 0) {
    const auto mc = mc_integral(spec, a.samples, a.seed, a.workers);
    doc["mc"] = Json{{"est", mc.estimate}, {"se", mc.standard_error}, {"samples", mc.samples}, {"hits", mc.hits}};
    doc["rng"] = Json{{"engine", kStreamEngineName}, {"stream_mix", kStreamMixName}, {"seed", std::to_string(a.seed)}};
  }
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_vr(std::uint64_t n, const std::string& r_text, std::uint64_t seed, std::ostream& out) {
  require(n >= 1, "--n: must be at least 1");
  const auto r = parse_scale_flag("--r", r_text);
  require(r.below_half(), "--r: must be below 1/2");
  auto rng = make_stream(seed, 0);
  const auto points = sample_uniform(n, rng);
  const auto res = analyze_vr(points, r);
  Json doc{{"schema", kSchema},
           {"kind", "vr"},
           {"n", n},
           {"r", to_json(r)},
           {"rng", {{"engine", kStreamEngineName}, {"stream_mix", kStreamMixName}, {"seed", std::to_string(seed)}}},
           {"core_size", res.core_size},
           {"ell", res.orbits.length},
           {"w", res.orbits.winding},
           {"orb", res.orbits.orbit_count},
           {"homotopy", to_json(res.homotopy)},
           {"core_is_periodic_set", res.core_is_periodic_set},
           {"expected_sphere_dim", expected_sphere_dimension(r)}};
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_report(const std::string& path, const std::string& format, std::ostream& out) {
  require(format == "text" || format == "json", "--format: expected text or json");
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::invalid_argument, "cannot open '" + path + "'");
  Json raw;
  try {
    raw = Json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema_mismatch, std::string("not valid JSON: ") + e.what());
  }
  const auto doc = experiment_from_json(raw);
  const auto& cfg = doc.config;
  bool recomputed = false;
  if (doc.has_rows) {
    const auto agg = aggregate_results(cfg, doc.results);
    if (!(agg == doc.aggregate)) throw Error(Errc::schema_mismatch, "embedded aggregate does not match trial rows");
    recomputed = true;
  }
  const auto rows = compare_with_theory(doc.aggregate, cfg.r, cfg.i_max);
  std::size_t flagged = 0;
  for (const auto& row : rows) flagged += row.flagged ? 1 : 0;
  const bool swift_applicable = cfg.r.is_rational();

  if (format == "json") {
    Json table = Json::array();
    for (const auto& row : rows) {
      table.push_back(Json{{"statistic", row.statistic},
                           {"observed", row.observed},
                           {"predicted", to_json(row.predicted)},
                           {"se", row.standard_error},
                           {"z", row.z},
                           {"pass", !row.flagged}});
    }
    Json report{{"schema", kSchema},
                {"kind", "report"},
                {"config", raw.at("config")},
                {"aggregate_recomputed", recomputed},
                {"sigma_rule", kSigmaRule},
                {"comparisons", std::move(table)},
                {"flagged", flagged},
                {"single_orbit_frequency", doc.aggregate.single_orbit_frequency()}};
    if (doc.aggregate.wf_bound_evaluated) report["wf_bound_frequency"] = doc.aggregate.wf_bound_frequency();
    if (!swift_applicable) report["swift"] = "inapplicable for fixed-point r";
    out << report.dump(2) << "\n";
    return kExitOk;
  }

  out << "experiment: n=" << cfg.n << " r=" << cfg.r.to_string() << " trials=" << cfg.trials << " seed=" << cfg.seed
      << "\n";
  out << "aggregate: " << (recomputed ? "recomputed from rows, matches" : "no rows, taken as embedded") << "\n";
  out << std::left << std::setw(12) << "statistic" << std::setw(14) << "observed" << std::setw(14) << "predicted"
      << std::setw(14) << "se" << std::setw(10) << "z"
      << "result\n";
  for (const auto& row : rows) {
    out << std::setw(12) << row.statistic << std::setw(14) << fixed_double(row.observed) << std::setw(14)
        << fixed_double(row.predicted.convert_to<double>()) << std::setw(14) << fixed_double(row.standard_error)
        << std::setw(10) << fixed_double(row.z, 3) << (row.flagged ? "FAIL" : "PASS") << "\n";
  }
  out << "single orbit frequency: " << fixed_double(doc.aggregate.single_orbit_frequency(), 4) << "\n";
  if (doc.aggregate.wf_bound_evaluated) {
    out << "wf >= r - 2 ln n / n frequency: " << fixed_double(doc.aggregate.wf_bound_frequency(), 4) << "\n";
  }
  if (!swift_applicable) {
    out << "per: the limit fraction is 0 for irrational r; finite samples keep a sublinear periodic set\n";
    out << "swi_i: inapplicable for fixed-point r\n";
  }
  out << rows.size() << " comparisons, " << flagged << " beyond " << kSigmaRule << " sigma\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclic dynamics on circle samples", "cyclic"};
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo statistics of random samples");
  simulate->add_option("--n", sim.n, "Points per sample")->required();
  simulate->add_option("--r", sim.r, "Scale: P/Q or fixed:0.ddd")->required();
  simulate->add_option("--trials", sim.trials, "Independent samples")->required();
  simulate->add_option("--seed", sim.seed, "Master seed")->required();
  simulate->add_option("--i-max", sim.i_max, "Largest level/type reported")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output file (stdout if omitted)");
  simulate->add_option("--format", sim.format, "json or csv")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();
  simulate->add_flag("--no-rows", sim.no_rows, "Omit per-trial rows from JSON");
  simulate->add_flag("--no-timestamp", sim.no_timestamp, "Omit generated_at");

  std::string theory_r, theory_format = "text";
  unsigned theory_i_max = 8;
  auto* theory = app.add_subcommand("theory", "Exact predicted fractions");
  theory->add_option("--r", theory_r, "Scale: P/Q or fixed:0.ddd")->required();
  theory->add_option("--i-max", theory_i_max, "Largest level/type")->capture_default_str();
  theory->add_option("--format", theory_format, "text or json")->capture_default_str();

  std::string cat_family;
  unsigned cat_i = 0;
  std::optional<int> cat_h;
  auto* cat = app.add_subcommand("catalan", "Catalan numbers and height-bounded variants");
  cat->add_option("--family", cat_family, "C, Cb or Cp")->required();
  cat->add_option("--i", cat_i, "Index")->required();
  cat->add_option("--h", cat_h, "Height bound");

  ConeArgs cone_args;
  auto* cone = app.add_subcommand("cone", "Exponential integral over a cone");
  cone->add_option("--family", cone_args.family, "K, Kq or S")->required();
  cone->add_option("--i", cone_args.i, "Index")->required();
  cone->add_option("--q", cone_args.q, "Denominator for Kq and S");
  cone->add_option("--samples", cone_args.samples, "Monte Carlo samples");
  cone->add_flag("--exact", cone_args.exact, "Exact value by linear extensions");
  cone->add_option("--seed", cone_args.seed, "Monte Carlo seed")->capture_default_str();
  cone->add_option("--workers", cone_args.workers, "Worker threads")->capture_default_str();

  std::uint64_t vr_n = 0, vr_seed = 0;
  std::string vr_r;
  auto* vr = app.add_subcommand("vr", "Vietoris-Rips core of a random sample");
  vr->add_option("--n", vr_n, "Points")->required();
  vr->add_option("--r", vr_r, "Scale below 1/2")->required();
  vr->add_option("--seed", vr_seed, "Seed")->required();

  std::string report_in, report_format = "text";
  auto* report = app.add_subcommand("report", "Compare an experiment file with theory");
  report->add_option("--in", report_in, "Experiment JSON from simulate")->required();
  report->add_option("--format", report_format, "text or json")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cyclic: usage error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (theory->parsed()) return cmd_theory(theory_r, theory_i_max, theory_format, out);
    if (cat->parsed()) return cmd_catalan(cat_family, cat_i, cat_h, out);
    if (cone->parsed()) return cmd_cone(cone_args, out);
    if (vr->parsed()) return cmd_vr(vr_n, vr_r, vr_seed, out);
    if (report->parsed()) return cmd_report(report_in, report_format, out);
  } catch (const UsageError& e) {
    err << "cyclic: usage error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "cyclic: error: " << one_line(e.what()) << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cyclic::cli
