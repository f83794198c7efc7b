#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "actdis/cli.hpp"
#include "actdis/eval.hpp"
#include "actdis/synth.hpp"
#include "actdis/util.hpp"
#include "support/test_util.hpp"

using namespace actdis;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "actdis");
  return cli::run(args);
}

/// A single strong cycling activity that every method separates cleanly.
std::string easy_config(int days) {
  SynthConfig c;
  c.seed = 5;
  c.days = days;
  c.start = parse_timestamp("2019-07-01T00:00:00Z");
  SynthActivity a;
  a.name = "cooling-heating";
  a.appliances = {{"compressor", {SignatureShape::OnOffCycle, 1.2, 0.5, 12, 60}},
                  {"furnace", {SignatureShape::OnOffCycle, 0.3, 0.5, 12, 60}}};
  a.hourly_activation.fill(0.3);
  c.activities = {a};
  return c.to_json();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  testutil::TempDir dir("cli_usage");
  CHECK(run({}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"--out", dir.path().string(), "simulate"}) == 2);
  CHECK(run({"--config", (dir / "missing.json").string(), "simulate"}) == 2);
  CHECK(run({"train"}) == 2);
  CHECK(run({"--version"}) == 0);
}

TEST_CASE("simulate writes three CSVs and a manifest, reproducibly") {
  testutil::TempDir a("cli_sim_a"), b("cli_sim_b");
  write_file_atomic(a / "cfg.json", easy_config(3));
  REQUIRE(run({"--config", (a / "cfg.json").string(), "--out", (a / "out").string(), "simulate"}) == 0);
  REQUIRE(run({"--config", (a / "cfg.json").string(), "--out", (b / "out").string(), "simulate"}) == 0);
  for (const char* f : {"load.csv", "weather.csv", "labels.csv", "config.json"}) {
    REQUIRE(fs::exists(a / "out" / f));
    CHECK(read_file(a / "out" / f) == read_file(b / "out" / f));
  }
  const auto manifest = nlohmann::json::parse(read_file(a / "out" / "manifest.json"));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["tool_version"] == cli::kToolVersion);
  CHECK(manifest["outputs"]["load.csv"] == sha256_hex(read_file(a / "out" / "load.csv")));
  CHECK(manifest["config_hash"].get<std::string>().size() == 64);

  REQUIRE(run({"--config", (a / "cfg.json").string(), "--seed", "6", "--out", (b / "s6").string(), "simulate"}) == 0);
  CHECK(read_file(b / "s6" / "load.csv") != read_file(a / "out" / "load.csv"));
}

TEST_CASE("train, detect, evaluate and plot-data on an easy corpus") {
  testutil::TempDir dir("cli_pipeline");
  write_file_atomic(dir / "cfg.json", easy_config(20));
  const std::string data = (dir / "data").string();
  REQUIRE(run({"--config", (dir / "cfg.json").string(), "--out", data, "simulate"}) == 0);

  const std::string load = data + "/load.csv", weather = data + "/weather.csv", labels = data + "/labels.csv";
  const std::string tr = (dir / "train").string();
  REQUIRE(run({"--out", tr, "train", "--load", load, "--weather", weather, "--labels", labels, "--method", "all"}) == 0);
  const std::string metrics = read_file(tr + "/metrics.csv");
  CHECK(count_lines(metrics) == 5);
  for (const char* m : {"M1", "M2", "M3", "M4"}) CHECK(fs::exists(tr + "/model_" + m + ".json"));

  const std::string det = (dir / "detect").string();
  REQUIRE(run({"--out", det, "detect", "--model", tr + "/model_M4.json", "--load", load, "--weather", weather, "--labels",
               labels}) == 0);
  const auto rows = parse_timeline_csv_text(read_file(det + "/timeline.csv"));
  CHECK(rows.size() == 20 * 24);
  CHECK(std::none_of(rows.begin(), rows.end(), [](const TimelineRow& r) { return !r.flag.empty(); }));
  CHECK(fs::exists(det + "/detections.csv"));

  const std::string ev = (dir / "eval").string();
  REQUIRE(run({"--out", ev, "evaluate", "--timeline", det + "/timeline.csv", "--name", "M4"}) == 0);
  CHECK(read_file(ev + "/metrics.csv") == "method,accuracy_pct,precision_pct,recall_pct\nM4,100,100,100\n");

  const std::string pd = (dir / "plot").string();
  REQUIRE(run({"--out", pd, "plot-data", "--input", tr + "/metrics.csv"}) == 0);
  const std::string tidy = read_file(pd + "/metrics_tidy.csv");
  CHECK(tidy.rfind("method,metric,value\nM1,accuracy,", 0) == 0);
  CHECK(count_lines(tidy) == 1 + 12);
  REQUIRE(run({"--out", pd, "plot-data", "--input", det + "/timeline.csv"}) == 0);
  CHECK(count_lines(read_file(pd + "/timeline_step.csv")) == 1 + 20 * 24 * 6);
  CHECK(run({"--out", pd, "plot-data", "--input", load}) == 2);
}

TEST_CASE("runtime errors exit with 1") {
  testutil::TempDir dir("cli_errors");
  write_file_atomic(dir / "cfg.json", easy_config(5));
  const std::string data = (dir / "data").string();
  REQUIRE(run({"--config", (dir / "cfg.json").string(), "--out", data, "simulate"}) == 0);
  const std::string load = data + "/load.csv", labels = data + "/labels.csv";

  // M4 without weather.
  CHECK(run({"--out", (dir / "t").string(), "train", "--load", load, "--labels", labels, "--method", "M4"}) == 1);

  // A model whose columns do not match its layout.
  REQUIRE(run({"--out", (dir / "t").string(), "train", "--load", load, "--labels", labels, "--method", "M1"}) == 0);
  auto model = nlohmann::json::parse(read_file(dir / "t" / "model_M1.json"));
  model["method"] = "M2";
  write_file_atomic(dir / "bad_model.json", model.dump());
  CHECK(run({"--out", (dir / "d").string(), "detect", "--model", (dir / "bad_model.json").string(), "--load", load}) == 1);

  // Empty load file.
  write_file_atomic(dir / "empty.csv", "");
  CHECK(run({"--out", (dir / "d").string(), "detect", "--model", (dir / "t" / "model_M1.json").string(), "--load",
             (dir / "empty.csv").string()}) == 1);
}

TEST_CASE("model command builds profiles and the onset matrix") {
  testutil::TempDir dir("cli_model");
  // Two activities alternating every other hour, each lasting one hour.
  std::string csv = "timestamp,A,B\n";
  const Timestamp t0 = parse_timestamp("2020-01-01T00:00:00Z");
  for (int h = 0; h < 48; ++h) {
    const int phase = h % 4;
    csv += format_timestamp(t0 + std::chrono::hours(h)) + "," + (phase == 0 ? "1" : "0") + "," + (phase == 2 ? "1" : "0") + "\n";
  }
  write_file_atomic(dir / "labels.csv", csv);
  REQUIRE(run({"--out", (dir / "m").string(), "model", "--labels", (dir / "labels.csv").string()}) == 0);
  const auto tm = nlohmann::json::parse(read_file(dir / "m" / "transitions.json"));
  CHECK(tm["P"] == nlohmann::json::parse("[[0.0, 1.0], [1.0, 0.0]]"));
  const std::string profile = read_file(dir / "m" / "profile.csv");
  CHECK(profile.find("\nA,0,1\n") != std::string::npos);
  CHECK(profile.find("\nB,2,1\n") != std::string::npos);

  std::string single = "timestamp,A\n";
  for (int h = 0; h < 48; ++h) single += format_timestamp(t0 + std::chrono::hours(h)) + "," + (h % 3 == 0 ? "1" : "0") + "\n";
  write_file_atomic(dir / "single.csv", single);
  REQUIRE(run({"--out", (dir / "s").string(), "model", "--labels", (dir / "single.csv").string()}) == 0);
  CHECK(nlohmann::json::parse(read_file(dir / "s" / "transitions.json"))["P"] == nlohmann::json::parse("[[1.0]]"));

  CHECK(run({"--out", (dir / "x").string(), "model", "--labels", (dir / "labels.csv").string(), "--states", "A,C"}) == 1);
}
