#include "cyclic/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <limits>
#include <sstream>
#include <tuple>

#include "cyclic/error.hpp"

namespace cyclic {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::schema_mismatch, what); }

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

u128 u128_from_string(const std::string& text) {
  if (text.empty()) schema_error("empty integer string");
  u128 v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') schema_error("bad integer string '" + text + "'");
    const u128 next = v * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != v) schema_error("integer string overflows 128 bits");
    v = next;
  }
  return v;
}

std::uint64_t u64_from_string(const std::string& text) {
  const auto v = u128_from_string(text);
  if (v > std::numeric_limits<std::uint64_t>::max()) schema_error("value exceeds 64 bits: " + text);
  return static_cast<std::uint64_t>(v);
}

template <typename T>
T get_field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) schema_error(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    schema_error(std::string("field '") + key + "': " + e.what());
  }
}

std::vector<std::uint64_t> get_counts(const Json& doc, const char* key) {
  return get_field<std::vector<std::uint64_t>>(doc, key);
}

Json integer_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

}  // namespace

Json to_json(const SampleSet& set) {
  Json ticks = Json::array();
  for (auto t : set.ticks()) ticks.push_back(std::to_string(t));
  return Json{{"ticks", std::move(ticks)}};
}

SampleSet sample_set_from_json(const Json& doc) {
  const auto raw = get_field<std::vector<std::string>>(doc, "ticks");
  std::vector<Tick> ticks;
  ticks.reserve(raw.size());
  for (const auto& t : raw) ticks.push_back(u64_from_string(t));
  return SampleSet::from_unsorted(std::move(ticks));
}

Json to_json(const Scale& r) {
  if (r.is_rational()) {
    return Json{{"kind", "rational"}, {"p", r.p()}, {"q", r.q()}, {"text", r.to_string()}};
  }
  return Json{{"kind", "fixed"}, {"ticks", std::to_string(r.as_fixed().num)}, {"value", r.to_double()}};
}

Scale scale_from_json(const Json& doc) {
  const auto kind = get_field<std::string>(doc, "kind");
  try {
    if (kind == "rational") return Scale::rational(get_field<std::uint64_t>(doc, "p"), get_field<std::uint64_t>(doc, "q"));
    if (kind == "fixed") return Scale::fixed(u64_from_string(get_field<std::string>(doc, "ticks")));
  } catch (const Error& e) {
    if (e.code() == Errc::schema_mismatch) throw;
    schema_error(std::string("bad scale: ") + e.what());
  }
  schema_error("unknown scale kind '" + kind + "'");
}

Json to_json(const ExactRational& x) {
  return Json{{"num", integer_json(numerator_of(x))}, {"den", integer_json(denominator_of(x))}};
}

Json to_json(const OrbitReport& report) {
  return Json{{"length", report.length},
              {"winding", report.winding},
              {"orbit_count", report.orbit_count},
              {"per", report.per()},
              {"wf", {{"num", report.wf_num()}, {"den", report.wf_den()}}}};
}

Json to_json(const LevelHistogram& hist) {
  return Json{{"counts", hist.counts}, {"max_level", hist.max_level()}};
}

Json to_json(const SwiftReport& report) {
  return Json{{"i_max", report.i_max},
              {"type_counts", report.type_counts},
              {"untyped", report.untyped},
              {"q_swift_count", report.q_swift_indices.size()},
              {"any_swift", report.any_swift}};
}

Json to_json(const HomotopyType& type) {
  const char* kind = type.kind == HomotopyType::Kind::odd_sphere ? "sphere" : (type.is_point() ? "point" : "wedge");
  return Json{{"kind", kind}, {"dim", type.dim}, {"copies", type.copies}, {"text", type.describe()}};
}

Json to_json(const Aggregate& agg) {
  // per, lev_0.., swi_0.., swi_sum, orbit_count: numeric suffixes in numeric order.
  std::vector<std::pair<std::string, const Statistic*>> ordered;
  for (const auto& [name, s] : agg.stats) ordered.emplace_back(name, &s);
  auto rank = [](const std::string& name) {
    const auto cut = name.find('_');
    const auto head = name.substr(0, cut);
    const int group = head == "per" ? 0 : head == "lev" ? 1 : head == "swi" ? 2 : 3;
    long index = -1;
    if (cut != std::string::npos) {
      const auto tail = name.substr(cut + 1);
      if (std::from_chars(tail.data(), tail.data() + tail.size(), index).ec != std::errc{}) index = 1L << 40;
    }
    return std::make_tuple(group, index, name);
  };
  std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) { return rank(a.first) < rank(b.first); });
  Json stats = Json::object();
  for (const auto& [name, sp] : ordered) {
    const Statistic& s = *sp;
    stats[name] = Json{{"mean", s.mean()},
                       {"sd", s.sd()},
                       {"se", s.se()},
                       {"trials", s.trials},
                       {"sum", u128_to_string(s.sum)},
                       {"sumsq", u128_to_string(s.sumsq)}};
  }
  return Json{{"trials", agg.trials},
              {"single_orbit_trials", agg.single_orbit_trials},
              {"single_orbit_frequency", agg.single_orbit_frequency()},
              {"swift_trials", agg.swift_trials},
              {"swift_identity_trials", agg.swift_identity_trials},
              {"wf_bound",
               {{"evaluated", agg.wf_bound_evaluated},
                {"passes", agg.wf_bound_passes},
                {"frequency", agg.wf_bound_frequency()}}},
              {"stats", std::move(stats)}};
}

Json to_json(const TrialResult& res) {
  Json row{{"trial", res.trial}, {"seed", std::to_string(res.trial_seed)}, {"per", res.per}, {"lev", res.lev}};
  if (res.has_orbits) {
    row["orbit_count"] = res.orbit_count;
    row["ell"] = res.ell;
    row["w"] = res.w;
    row["wf"] = Json{{"num", res.w}, {"den", res.ell}};
  }
  if (res.has_swift) {
    row["swi"] = res.swi;
    row["untyped"] = res.untyped;
    row["any_swift"] = res.any_swift;
  }
  return row;
}

Json experiment_to_json(const ExperimentConfig& cfg, const Experiment& exp, bool include_rows,
                        const std::string& generated_at) {
  Json doc{{"schema", kSchema}, {"kind", "experiment"}};
  if (!generated_at.empty()) doc["generated_at"] = generated_at;
  doc["rng"] = Json{{"engine", kStreamEngineName}, {"stream_mix", kStreamMixName}, {"seed", std::to_string(cfg.seed)}};
  doc["config"] = Json{{"n", cfg.n},
                       {"r", to_json(cfg.r)},
                       {"trials", cfg.trials},
                       {"seed", std::to_string(cfg.seed)},
                       {"i_max", cfg.i_max},
                       {"stats", {{"levels", cfg.stats.levels}, {"orbits", cfg.stats.orbits}, {"swift", cfg.stats.swift}}}};
  doc["aggregate"] = to_json(exp.aggregate);
  if (include_rows) {
    Json rows = Json::array();
    for (const auto& res : exp.results) rows.push_back(to_json(res));
    doc["trials"] = std::move(rows);
  }
  return doc;
}

ExperimentDocument experiment_from_json(const Json& doc) {
  if (!doc.is_object()) schema_error("experiment document must be a JSON object");
  if (get_field<std::string>(doc, "schema") != kSchema) schema_error("unsupported schema");
  if (get_field<std::string>(doc, "kind") != "experiment") schema_error("document is not an experiment");

  ExperimentDocument out;
  const auto cfg_doc = get_field<Json>(doc, "config");
  auto& cfg = out.config;
  cfg.n = get_field<std::uint64_t>(cfg_doc, "n");
  cfg.r = scale_from_json(get_field<Json>(cfg_doc, "r"));
  cfg.trials = get_field<std::uint64_t>(cfg_doc, "trials");
  cfg.seed = u64_from_string(get_field<std::string>(cfg_doc, "seed"));
  cfg.i_max = get_field<unsigned>(cfg_doc, "i_max");
  const auto stats = get_field<Json>(cfg_doc, "stats");
  cfg.stats = StatisticFlags{get_field<bool>(stats, "levels"), get_field<bool>(stats, "orbits"),
                             get_field<bool>(stats, "swift")};
  if (cfg.n == 0 || cfg.trials == 0) schema_error("config needs n >= 1 and trials >= 1");

  const auto agg_doc = get_field<Json>(doc, "aggregate");
  auto& agg = out.aggregate;
  agg.trials = get_field<std::uint64_t>(agg_doc, "trials");
  agg.single_orbit_trials = get_field<std::uint64_t>(agg_doc, "single_orbit_trials");
  agg.swift_trials = get_field<std::uint64_t>(agg_doc, "swift_trials");
  agg.swift_identity_trials = get_field<std::uint64_t>(agg_doc, "swift_identity_trials");
  const auto wf = get_field<Json>(agg_doc, "wf_bound");
  agg.wf_bound_evaluated = get_field<bool>(wf, "evaluated");
  agg.wf_bound_passes = get_field<std::uint64_t>(wf, "passes");
  const auto stats_doc = get_field<Json>(agg_doc, "stats");
  for (const auto& [name, s] : stats_doc.items()) {
    Statistic stat;
    stat.n = cfg.n;
    stat.trials = get_field<std::uint64_t>(s, "trials");
    stat.sum = u128_from_string(get_field<std::string>(s, "sum"));
    stat.sumsq = u128_from_string(get_field<std::string>(s, "sumsq"));
    agg.stats[name] = stat;
  }

  out.has_rows = doc.contains("trials");
  if (!out.has_rows) return out;
  const auto& rows = doc.at("trials");
  if (!rows.is_array()) schema_error("'trials' must be an array");
  if (rows.size() != cfg.trials) schema_error("row count does not match config.trials");
  for (const auto& row : rows) {
    TrialResult res;
    res.trial = get_field<std::uint64_t>(row, "trial");
    res.trial_seed = u64_from_string(get_field<std::string>(row, "seed"));
    res.per = get_field<std::uint64_t>(row, "per");
    res.lev = get_counts(row, "lev");
    if (row.contains("orbit_count")) {
      res.has_orbits = true;
      res.orbit_count = get_field<std::uint64_t>(row, "orbit_count");
      res.ell = get_field<std::uint64_t>(row, "ell");
      res.w = get_field<std::uint64_t>(row, "w");
    }
    if (row.contains("swi")) {
      res.has_swift = true;
      res.swi = get_counts(row, "swi");
      res.untyped = get_field<std::uint64_t>(row, "untyped");
      res.any_swift = get_field<bool>(row, "any_swift");
    }
    if (res.per + res.lev_total() != cfg.n) {
      schema_error("trial " + std::to_string(res.trial) + ": per + sum(lev) != n");
    }
    out.results.push_back(std::move(res));
  }
  return out;
}

std::string experiment_to_csv(const ExperimentConfig& cfg, const std::vector<TrialResult>& results) {
  std::ostringstream out;
  out << "trial,per";
  for (unsigned i = 0; i <= cfg.i_max; ++i) out << ",lev_" << i;
  out << ",orbit_count,ell,w,wf_num,wf_den\n";
  for (const auto& res : results) {
    out << res.trial << ',' << res.per;
    for (unsigned i = 0; i <= cfg.i_max; ++i) out << ',' << (i < res.lev.size() ? res.lev[i] : 0);
    if (res.has_orbits) {
      out << ',' << res.orbit_count << ',' << res.ell << ',' << res.w << ',' << res.w << ',' << res.ell << '\n';
    } else {
      out << ",,,,,\n";
    }
  }
  return out.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cyclic
