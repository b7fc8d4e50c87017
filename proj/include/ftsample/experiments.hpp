#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftsample/bounds.hpp"
#include "ftsample/error.hpp"

namespace ftsample {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { csv, json };

const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
  std::string kind;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::size_t jobs = 0;  // 0: one per hardware thread
  std::string out_dir = "results";
  OutputFormat format = OutputFormat::csv;

  struct Grid {
    std::vector<std::uint64_t> p;
    std::vector<double> q_multiplier;
    std::uint64_t q_offset = 0;
    // multiple: q = m·p + offset; range: every q in (2p, max(m)·p];
    // threshold: the smallest q meeting the inequality's hypothesis.
    std::string q_mode = "multiple";
    std::uint64_t q_max = 24;
    std::vector<double> r;
    std::vector<double> s_n;
    std::vector<double> delta;
    std::uint64_t k = 2;
    std::uint64_t m = 2;
  } grid;

  std::vector<std::string> instances;  // JSON instance specs
  std::size_t random_instances = 0;
  std::uint64_t max_r = 100;

  nlohmann::ordered_json to_json() const;
};

// Config errors collected in one pass; each names the field path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Parses YAML, applies the kind's defaults and range-checks every field.
ExperimentConfig validate_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
void check_config(const ExperimentConfig& config);

struct Tallies {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
  std::size_t outside_hypothesis = 0;  // missed, but the hypothesis on q was not met
};

struct RunManifest {
  ExperimentConfig config;
  std::string tool_version = kToolVersion;
  double duration_seconds = 0.0;
  Tallies tallies;
  std::vector<BoundReport> failures;  // first few counted failures
  std::vector<std::string> outputs;

  bool ok() const noexcept { return tallies.failed == 0; }
  std::string to_json() const;
};

// Rows of a results table plus the checks they imply. Row objects share
// one key order, which becomes the CSV column order.
struct ExperimentOutput {
  std::vector<nlohmann::ordered_json> rows;
  std::vector<nlohmann::ordered_json> summary;
  std::vector<BoundReport> checks;
  bool rows_are_checks = false;
};

// Runs independent tasks on `jobs` threads; results come back in task order.
std::vector<ExperimentOutput> run_ordered(std::vector<std::function<ExperimentOutput()>> tasks,
                                          std::size_t jobs);

// Seed for task `index` of a run seeded with `seed` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

ExperimentOutput run_experiment(const ExperimentConfig& config);

// Runs the experiment and writes <kind>.{csv,json}, an optional
// <kind>_summary file and manifest.json under config.out_dir.
RunManifest run(const ExperimentConfig& config);

std::string table_to_csv(const std::vector<nlohmann::ordered_json>& rows);
std::string checks_to_csv(const std::vector<BoundReport>& checks);

enum class FigureSource { beta_delta, alpha_delta };

// Columns index,beta_abs,gamma_abs over [0, q). With beta_delta (the
// default) β = |j⟩ and α = FT_p⁻¹ β; with alpha_delta α = |j⟩. β is blank
// past index p.
std::string emit_figure_data(std::size_t j, std::size_t p, std::size_t q,
                             FigureSource source = FigureSource::beta_delta);

}  // namespace ftsample
