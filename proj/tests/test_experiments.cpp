#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ftsample/experiments.hpp"

using namespace ftsample;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ftsample_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> issues_of(const std::string& yaml) {
  try {
    validate_config(yaml);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

// Small config for each kind, sized to run in well under a second.
const std::vector<std::pair<std::string, std::string>> kSmall = {
    {"claim1-sweep", "experiment: claim1-sweep\ngrid: {p: [3, 5], q_multiplier: [3, 4]}\n"},
    {"observation-sweep", "experiment: observation-sweep\ntrials: 10\ngrid: {p: [5]}\n"},
    {"l1-convergence", "experiment: l1-convergence\ntrials: 5\ngrid: {p: [4], q_multiplier: [2, 8]}\n"},
    {"lemma1", "experiment: lemma1\ntrials: 2\ngrid: {p: [4], r: [1]}\n"},
    {"lemma2", "experiment: lemma2\ntrials: 2\ngrid: {p: [4], r: [2]}\n"},
    {"theorem1", "experiment: theorem1\ntrials: 3\ngrid: {p: [4], s_n: [2], q_multiplier: [2, 4]}\n"},
    {"multidim", "experiment: multidim\ntrials: 3\ngrid: {p: [2, 3], k: 2, q_max: 8}\n"},
    {"shor", "experiment: shor\ntrials: 3\ninstances:\n  - {type: modular_exponentiation, base: 2, modulus: 9}\n"},
    {"boneh-lipton",
     "experiment: boneh-lipton\ntrials: 5\ngrid: {r: [8], m: 2, q_multiplier: [3]}\n"
     "instances:\n  - {type: affine_mod, r: 3, m: 1, alpha: 2}\n"},
};

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = validate_config("experiment: claim1-sweep\ngrid:\n  p: [4]\n  q_multiplier: [3]\n");
  CHECK(c.trials == 100);
  CHECK(c.format == OutputFormat::csv);
  CHECK(c.seed == 0);
  CHECK(c.grid.p == std::vector<std::uint64_t>{4});
}

TEST_CASE("list fields accept scalars, lists and ranges") {
  const auto c = validate_config(
      "experiment: claim1-sweep\ngrid:\n  p: {from: 3, to: 9, step: 3}\n  q_multiplier: 5\n");
  CHECK(c.grid.p == std::vector<std::uint64_t>{3, 6, 9});
  CHECK(c.grid.q_multiplier == std::vector<double>{5});
}

TEST_CASE("config errors name the field") {
  CHECK(mentions(issues_of("experiment: claim1-sweep\ngrid:\n  p: []\n  q_multiplier: [3]\n"), "grid.p"));
  const auto unknown = issues_of("experiment: nope\n");
  REQUIRE_FALSE(unknown.empty());
  CHECK(mentions(unknown, "claim1-sweep"));
  CHECK(mentions(unknown, "boneh-lipton"));
  CHECK(mentions(issues_of("experiment: lemma1\ntrials: 0\ngrid: {p: [8]}\n"), "trials"));
  CHECK(mentions(issues_of("experiment: lemma1\ngrid: {p: [8], colour: 3}\n"), "grid.colour"));
  CHECK(mentions(issues_of("experiment: claim1-sweep\noutput: {format: xml}\ngrid: {p: [4]}\n"), "output.format"));
  CHECK(mentions(issues_of("experiment: claim1-sweep\ngrid: {p: [4], q_multiplier: [2]}\n"), "grid.q_multiplier"));
  CHECK(mentions(issues_of("experiment: [\n"), ""));  // malformed YAML still reports
  // several problems come back together
  CHECK(issues_of("experiment: lemma1\ntrials: 0\ngrid: {p: [], bogus: 1}\n").size() >= 3);
}

TEST_CASE("every kind has a small config that validates and runs") {
  CHECK(experiment_kinds().size() == kSmall.size());
  for (const auto& [kind, yaml] : kSmall) {
    CAPTURE(kind);
    auto c = validate_config(yaml);
    CHECK(c.kind == kind);
    c.jobs = 1;
    const auto out = run_experiment(c);
    CHECK_FALSE(out.checks.empty());
    if (kind != "observation-sweep") {
      for (const auto& r : out.checks) CHECK_MESSAGE(!r.counts_as_failure(), r.check);
    }
  }
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  for (const auto& [kind, yaml] : kSmall) {
    CAPTURE(kind);
    auto c = validate_config(yaml);
    c.seed = 42;
    std::vector<std::string> texts;
    for (std::size_t jobs : {1u, 1u, 3u}) {
      c.jobs = jobs;
      c.out_dir = scratch(kind + std::to_string(texts.size())).string();
      const auto m = run(c);
      std::string all;
      for (const auto& name : m.outputs) {
        if (name != "manifest.json") all += slurp(fs::path(c.out_dir) / name);
      }
      texts.push_back(all);
      fs::remove_all(c.out_dir);
    }
    CHECK(texts[0] == texts[1]);
    CHECK(texts[0] == texts[2]);
  }
}

TEST_CASE("different seeds give different random draws") {
  auto c = validate_config(kSmall[1].second);
  c.seed = 1;
  const auto a = run_experiment(c);
  c.seed = 2;
  const auto b = run_experiment(c);
  CHECK(a.checks.front().computed != b.checks.front().computed);
}

TEST_CASE("run writes the table, checks and manifest") {
  auto c = validate_config(kSmall[0].second);
  c.out_dir = scratch("manifest").string();
  const auto m = run(c);
  CHECK(fs::exists(fs::path(c.out_dir) / "claim1-sweep.csv"));
  CHECK(fs::exists(fs::path(c.out_dir) / "manifest.json"));
  const auto j = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "manifest.json"));
  CHECK(j["version"] == kToolVersion);
  CHECK(j["config"]["experiment"] == "claim1-sweep");
  const auto& t = j["tallies"];
  CHECK(t["passed"].get<int>() + t["failed"].get<int>() == t["total"].get<int>());
  CHECK(m.ok());
  const auto csv = slurp(fs::path(c.out_dir) / "claim1-sweep.csv");
  CHECK(csv.rfind(bound_report_csv_header(), 0) == 0);
  // one line per check plus the header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == std::ptrdiff_t(m.tallies.total + 1));

  c.format = OutputFormat::json;
  run(c);
  CHECK_NOTHROW((void)nlohmann::json::parse(slurp(fs::path(c.out_dir) / "claim1-sweep.json")));
  fs::remove_all(c.out_dir);
}

TEST_CASE("observation run reports its failures") {
  auto c = validate_config("experiment: observation-sweep\ntrials: 50\ngrid: {p: [5]}\n");
  c.out_dir = scratch("observation").string();
  const auto m = run(c);
  CHECK(m.tallies.total == m.tallies.passed + m.tallies.failed);
  CHECK(m.tallies.failed > 0);
  CHECK_FALSE(m.ok());
  CHECK_FALSE(m.failures.empty());
  fs::remove_all(c.out_dir);
}

TEST_CASE("csv quoting") {
  std::vector<nlohmann::ordered_json> rows = {
      {{"name", "a,b"}, {"note", "say \"hi\""}, {"x", 1.5}},
      {{"name", "plain"}, {"note", "line\nbreak"}, {"x", 2}},
  };
  const auto csv = table_to_csv(rows);
  CHECK(csv == "name,note,x\n\"a,b\",\"say \"\"hi\"\"\",1.5\nplain,\"line\nbreak\",2\n");
  CHECK(table_to_csv({}).empty());
}

TEST_CASE("run_ordered keeps task order under threads") {
  std::vector<std::function<ExperimentOutput()>> tasks;
  std::atomic<int> ran{0};
  for (int i = 0; i < 50; ++i) {
    tasks.push_back([i, &ran] {
      ++ran;
      if (i % 7 == 0) std::this_thread::sleep_for(std::chrono::milliseconds(1));
      ExperimentOutput o;
      o.rows.push_back({{"i", i}});
      return o;
    });
  }
  const auto out = run_ordered(tasks, 4);
  CHECK(ran == 50);
  REQUIRE(out.size() == 50);
  for (int i = 0; i < 50; ++i) CHECK(out[i].rows[0]["i"] == i);

  std::vector<std::function<ExperimentOutput()>> boom = {
      [] { return ExperimentOutput{}; },
      []() -> ExperimentOutput { throw Error(Errc::precondition, "bad task"); }};
  CHECK_THROWS_AS(run_ordered(boom, 2), Error);
}

TEST_CASE("derive_seed spreads nearby inputs") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("figure data for a delta at j=3, p=8, q=64") {
  const auto text = emit_figure_data(3, 8, 64);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,beta_abs,gamma_abs");
  std::vector<double> gamma;
  int blank_beta = 0;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    if (b == a + 1) ++blank_beta;
    gamma.push_back(std::stod(line.substr(b + 1)));
  }
  REQUIRE(gamma.size() == 64);
  CHECK(blank_beta == 64 - 8);
  const auto peak = std::max_element(gamma.begin(), gamma.end()) - gamma.begin();
  CHECK(peak == 24);
  // falls off roughly like 1/distance between the exact zeros at multiples of 8
  CHECK(gamma[25] > gamma[26]);
  CHECK(gamma[23] > gamma[22]);
  CHECK(gamma[32] < 1e-12);

  // delta α at 0 with p = q: β flat and γ flat
  const auto flat = emit_figure_data(0, 6, 6, FigureSource::alpha_delta);
  std::istringstream f(flat);
  std::getline(f, line);
  while (std::getline(f, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    CHECK(std::stod(line.substr(a + 1, b - a - 1)) == doctest::Approx(1 / std::sqrt(6.0)));
    CHECK(std::stod(line.substr(b + 1)) == doctest::Approx(1 / std::sqrt(6.0)));
  }
  CHECK_THROWS_AS(emit_figure_data(0, 8, 4), Error);
}
