#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ftsample/experiments.hpp"

using namespace ftsample;

namespace {

int report_error(const Error& e) {
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    std::cerr << "config error:\n";
    for (const auto& issue : ce->issues()) std::cerr << "  " << issue << '\n';
  } else {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
  }
  return 2;
}

std::optional<std::size_t> jobs_from_env() {
  const char* env = std::getenv("FTSAMPLE_JOBS");
  if (!env || !*env) return std::nullopt;
  try {
    return std::stoul(env);
  } catch (const std::exception&) {
    throw Error(Errc::config, std::string("FTSAMPLE_JOBS is not a number: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier sampling over mismatched domains: bound checks and pipelines"};
  app.set_version_flag("--version", std::string("ftsample ") + kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<std::size_t> jobs;

  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("--config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--jobs", jobs, "Worker threads (falls back to FTSAMPLE_JOBS)");

  std::string kind = "delta-response";
  std::size_t p = 0, q = 0, j = 0;
  std::string source = "beta";
  std::optional<std::string> figure_out;
  auto* fig_cmd = app.add_subcommand("figure", "Write plot-ready data for a figure");
  fig_cmd->add_option("--kind", kind, "Figure kind")->check(CLI::IsMember({"delta-response"}));
  fig_cmd->add_option("--p", p, "Small domain size")->required();
  fig_cmd->add_option("--q", q, "Large domain size")->required();
  fig_cmd->add_option("--j", j, "Delta position in [0, p)")->required();
  fig_cmd->add_option("--source", source, "beta: beta is the delta; alpha: alpha is the delta")
      ->check(CLI::IsMember({"beta", "alpha"}));
  fig_cmd->add_option("--out", figure_out, "Output file (default stdout)");

  auto* val_cmd = app.add_subcommand("validate", "Check a config file and print it with defaults applied");
  val_cmd->add_option("--config", config_path, "YAML config file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto config = load_config(config_path);
      if (seed) config.seed = *seed;
      if (out_dir) config.out_dir = *out_dir;
      if (format) config.format = *format == "json" ? OutputFormat::json : OutputFormat::csv;
      if (jobs) {
        config.jobs = *jobs;
      } else if (auto env = jobs_from_env()) {
        config.jobs = *env;
      }
      const auto manifest = run(config);
      const auto& t = manifest.tallies;
      std::cout << config.kind << ": " << t.total << " checks, " << t.passed << " passed, "
                << t.failed << " failed, " << t.vacuous << " vacuous, " << t.outside_hypothesis
                << " outside hypothesis (" << manifest.duration_seconds << " s)\n";
      for (const auto& f : manifest.failures) std::cout << "  FAIL " << bound_report_to_json(f) << '\n';
      std::cout << "wrote " << config.out_dir << '\n';
      return manifest.ok() ? 0 : 1;
    }
    if (*fig_cmd) {
      const auto text = emit_figure_data(j, p, q, source == "alpha" ? FigureSource::alpha_delta
                                                                   : FigureSource::beta_delta);
      if (figure_out) {
        std::ofstream out(*figure_out, std::ios::binary);
        if (!out) throw Error(Errc::io, "cannot write " + *figure_out);
        out << text;
      } else {
        std::cout << text;
      }
      return 0;
    }
    if (*val_cmd) {
      const auto config = load_config(config_path);
      std::cout << config.to_json().dump(2) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
