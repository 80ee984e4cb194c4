#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cyclic/cli.hpp"
#include "cyclic/io.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cyclic::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cyclic_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool one_line(const std::string& text) { return !text.empty() && text.find('\n') == text.size() - 1; }

}  // namespace

TEST_CASE("theory table") {
  const auto res = run({"theory", "--r", "1/3", "--i-max", "3"});
  CHECK(res.code == 0);
  CHECK(res.out.find("per = 1/3") != std::string::npos);
  CHECK(res.out.find("0   1/2") != std::string::npos);
  CHECK(res.out.find("1   1/8") != std::string::npos);
  const auto js = cyclic::Json::parse(run({"theory", "--r", "1/3", "--i-max", "3", "--format", "json"}).out);
  CHECK(js["rows"][1]["lev"] == cyclic::Json{{"num", 1}, {"den", 8}});
  CHECK(js["per"] == cyclic::Json{{"num", 1}, {"den", 3}});
  const auto fixed = run({"theory", "--r", "fixed:0.6180339887", "--i-max", "3"});
  CHECK(fixed.out.find("3   5/128") != std::string::npos);
  CHECK(fixed.out.find("inapplicable") != std::string::npos);
}

TEST_CASE("catalan and cone") {
  CHECK(run({"catalan", "--family", "C", "--i", "10"}).out == "16796\n");
  CHECK(run({"catalan", "--family", "Cb", "--i", "3", "--h", "2"}).out == "4\n");
  CHECK(run({"catalan", "--family", "Cp", "--i", "4", "--h", "1"}).out == "1\n");
  CHECK(run({"catalan", "--family", "Cb", "--i", "5"}).code == 2);

  const auto cone = run({"cone", "--family", "K", "--i", "2", "--exact"});
  CHECK(cone.code == 0);
  const auto js = cyclic::Json::parse(cone.out);
  CHECK(js["exact"] == cyclic::Json{{"num", 1}, {"den", 16}});
  CHECK(js["family"] == "K");

  const auto mc = cyclic::Json::parse(run({"cone", "--family", "S", "--i", "0", "--q", "3", "--samples", "100000", "--seed", "4", "--exact"}).out);
  CHECK(mc["exact"] == cyclic::Json{{"num", 1}, {"den", 4}});
  CHECK(std::abs(mc["mc"]["est"].get<double>() - 0.25) < 4 * mc["mc"]["se"].get<double>());
  CHECK(mc["rng"]["seed"] == "4");

  CHECK(run({"cone", "--family", "Kq", "--i", "2", "--exact"}).code == 2);
  CHECK(run({"cone", "--family", "K", "--i", "2"}).code == 2);
  CHECK(run({"cone", "--family", "K", "--i", "20", "--exact"}).code == 1);
}

TEST_CASE("simulate a single point") {
  const auto res = run({"simulate", "--n", "1", "--r", "1/2", "--trials", "1", "--seed", "7"});
  REQUIRE(res.code == 0);
  const auto js = cyclic::Json::parse(res.out);
  CHECK(js["trials"][0]["per"] == 1);
  CHECK(js["trials"][0]["ell"] == 1);
  CHECK(js["trials"][0]["w"] == 0);
  CHECK(js.contains("generated_at"));
}

TEST_CASE("same seed gives identical output") {
  const std::vector<std::string> args{"simulate", "--n", "400", "--r", "fixed:0.6180339887", "--trials", "4", "--seed", "5", "--no-timestamp"};
  const auto a = run(args);
  auto more = args;
  more.insert(more.end(), {"--workers", "3"});
  const auto b = run(more);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto js = cyclic::Json::parse(a.out);
  CHECK(js["config"]["r"]["ticks"] == "11400714818402800990");

  // With timestamps the documents differ at most in generated_at.
  auto x = cyclic::Json::parse(run({"simulate", "--n", "50", "--r", "1/3", "--trials", "2", "--seed", "1"}).out);
  auto y = cyclic::Json::parse(run({"simulate", "--n", "50", "--r", "1/3", "--trials", "2", "--seed", "1"}).out);
  x.erase("generated_at");
  y.erase("generated_at");
  CHECK(x == y);
}

TEST_CASE("simulate then report") {
  const auto path = temp_path("round_trip.json");
  const auto sim = run({"simulate", "--n", "2000", "--r", "1/3", "--trials", "10", "--seed", "3", "--out", path});
  REQUIRE(sim.code == 0);
  const auto written = cyclic::experiment_from_json(cyclic::Json::parse(slurp(path)));
  const auto rep = run({"report", "--in", path, "--format", "json"});
  REQUIRE(rep.code == 0);
  const auto js = cyclic::Json::parse(rep.out);
  CHECK(js["aggregate_recomputed"] == true);
  CHECK(js["comparisons"][0]["statistic"] == "per");
  CHECK(js["comparisons"][0]["predicted"] == cyclic::Json{{"num", 1}, {"den", 3}});
  CHECK(written.aggregate == cyclic::aggregate_results(written.config, written.results));
  const auto text = run({"report", "--in", path});
  CHECK(text.out.find("per ") != std::string::npos);
  CHECK(text.out.find("swi_sum") != std::string::npos);

  // Break conservation in one row.
  auto doc = cyclic::Json::parse(slurp(path));
  doc["trials"][4]["per"] = doc["trials"][4]["per"].get<std::uint64_t>() + 1;
  const auto tampered = temp_path("tampered.json");
  std::ofstream(tampered) << doc.dump();
  const auto bad = run({"report", "--in", tampered});
  CHECK(bad.code == 1);
  CHECK(one_line(bad.err));
  CHECK(bad.err.find("SchemaMismatch") != std::string::npos);

  // Rows intact but the embedded aggregate edited.
  doc = cyclic::Json::parse(slurp(path));
  doc["aggregate"]["stats"]["per"]["sum"] = "1";
  std::ofstream(tampered) << doc.dump();
  CHECK(run({"report", "--in", tampered}).code == 1);

  std::ofstream(tampered) << "{not json";
  CHECK(run({"report", "--in", tampered}).code == 1);
  CHECK(run({"report", "--in", temp_path("missing.json")}).code == 1);
  std::filesystem::remove(path);
  std::filesystem::remove(tampered);
}

TEST_CASE("fixed-scale report notes swiftness as inapplicable") {
  const auto path = temp_path("fixed.json");
  REQUIRE(run({"simulate", "--n", "500", "--r", "fixed:0.6180339887", "--trials", "4", "--seed", "2", "--out", path}).code == 0);
  const auto rep = run({"report", "--in", path});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("swi_i: inapplicable") != std::string::npos);
  CHECK(rep.out.find("swi_0") == std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("CSV output") {
  const auto res = run({"simulate", "--n", "30", "--r", "2/5", "--trials", "3", "--seed", "1", "--format", "csv", "--i-max", "1"});
  CHECK(res.code == 0);
  CHECK(res.out.rfind("trial,per,lev_0,lev_1,orbit_count,ell,w,wf_num,wf_den\n", 0) == 0);
}

TEST_CASE("vr subcommand") {
  const auto res = run({"vr", "--n", "300", "--r", "3/10", "--seed", "1"});
  REQUIRE(res.code == 0);
  const auto js = cyclic::Json::parse(res.out);
  CHECK(js["core_is_periodic_set"] == true);
  CHECK(js["core_size"] == js["ell"].get<std::uint64_t>() * js["orb"].get<std::uint64_t>());
  CHECK(js["homotopy"]["kind"] == "sphere");
  CHECK(js["homotopy"]["dim"] == 1);
  CHECK(run({"vr", "--n", "300", "--r", "1/2", "--seed", "1"}).code == 2);
}

TEST_CASE("usage errors") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"bogus"},
           {"simulate", "--n", "10", "--r", "1/3", "--trials", "2"},
           {"simulate", "--n", "0", "--r", "1/3", "--trials", "2", "--seed", "1"},
           {"simulate", "--n", "10", "--r", "4/3", "--trials", "2", "--seed", "1"},
           {"simulate", "--n", "10", "--r", "1/3", "--trials", "2", "--seed", "1", "--format", "xml"},
           {"simulate", "--n", "ten", "--r", "1/3", "--trials", "2", "--seed", "1"},
           {"theory", "--r", "fixed:2"},
           {"cone", "--family", "Z", "--i", "1", "--exact"},
       }) {
    const auto res = run(args);
    CAPTURE(res.err);
    CHECK(res.code == 2);
    CHECK(one_line(res.err));
  }
  const auto res = run({"simulate", "--n", "10", "--r", "4/3", "--trials", "2", "--seed", "1"});
  CHECK(res.err.find("--r") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}
