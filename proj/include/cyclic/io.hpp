#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cyclic/circle.hpp"
#include "cyclic/dynamics.hpp"
#include "cyclic/exact.hpp"
#include "cyclic/montecarlo.hpp"
#include "cyclic/vr.hpp"

namespace cyclic {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "cyclic-dyn/1";

/// {"ticks": ["<decimal>", ...]}; ticks travel as strings to keep 64 bits.
Json to_json(const SampleSet& set);
SampleSet sample_set_from_json(const Json& doc);

Json to_json(const Scale& r);
Scale scale_from_json(const Json& doc);

/// {"num": .., "den": ..}; numbers when they fit in 64 bits, else strings.
Json to_json(const ExactRational& x);

Json to_json(const OrbitReport& report);
Json to_json(const LevelHistogram& hist);
Json to_json(const SwiftReport& report);
Json to_json(const HomotopyType& type);
Json to_json(const Aggregate& agg);
Json to_json(const TrialResult& res);

struct ExperimentDocument {
  ExperimentConfig config;
  std::vector<TrialResult> results;
  Aggregate aggregate;
  bool has_rows = true;
};

/// The experiment document; `generated_at` is the only field outside the
/// determinism contract and is omitted when empty.
Json experiment_to_json(const ExperimentConfig& cfg, const Experiment& exp, bool include_rows,
                        const std::string& generated_at);
/// Throws SchemaMismatch on anything malformed.
ExperimentDocument experiment_from_json(const Json& doc);

/// trial, per, lev_0..lev_{i_max}, orbit_count, ell, w, wf_num, wf_den
std::string experiment_to_csv(const ExperimentConfig& cfg, const std::vector<TrialResult>& results);

std::string utc_timestamp();

}  // namespace cyclic
