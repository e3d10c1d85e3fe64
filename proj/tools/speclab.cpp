// speclab: run, validate and list channel-spectrum experiments.
//
// Exit codes: 0 success, 1 a run failed, 2 bad config or usage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "speclab/config.hpp"
#include "speclab/experiment.hpp"
#include "speclab/presets.hpp"

namespace {

// A path that exists wins over a preset of the same name.
speclab::ExperimentConfig load(const std::string& what) {
  if (std::filesystem::exists(what)) return speclab::load_config(what);
  if (auto preset = speclab::find_preset(what)) return speclab::parse_config(preset->yaml);
  throw speclab::ConfigError(speclab::ConfigErrors{{"no such file or preset: '" + what + "'"}});
}

void report(const speclab::ConfigError& e) {
  std::cerr << "invalid config:\n";
  for (const auto& m : e.errors().messages) std::cerr << "  - " << m << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speclab: spectra of quantum channels and their random-matrix statistics"};
  app.set_version_flag("--version", std::string(SPECLAB_VERSION));
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  std::string config_arg;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;

  auto* run = app.add_subcommand("run", "run an experiment from a config file or preset name");
  run->add_option("config", config_arg, "config file or preset name")->required();
  run->add_option("--seed", seed, "override the seed");
  run->add_option("--samples", samples, "override the sample count")->check(CLI::PositiveNumber);
  run->add_option("--out-dir", out_dir, "override the output directory");
  run->add_option("--threads", threads, "worker threads (default: SPECLAB_THREADS, then config, then all cores)")
      ->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("validate", "check a config and print it with defaults filled in");
  check->add_option("config", config_arg, "config file or preset name")->required();

  auto* pre = app.add_subcommand("presets", "shipped configurations");
  pre->require_subcommand(1);
  auto* list = pre->add_subcommand("list", "list presets");
  std::string show_name;
  auto* show = pre->add_subcommand("show", "print a preset's YAML");
  show->add_option("name", show_name)->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    if (*list) {
      for (const auto& p : speclab::presets()) std::printf("%-18s %s\n", std::string(p.name).c_str(), std::string(p.summary).c_str());
      return 0;
    }
    if (*show) {
      const auto p = speclab::find_preset(show_name);
      if (!p) {
        std::cerr << "unknown preset '" << show_name << "'\n";
        return 2;
      }
      std::cout << p->yaml;
      return 0;
    }
    if (*check) {
      const auto cfg = load(config_arg);
      std::cout << speclab::to_yaml(cfg);
      return 0;
    }

    auto cfg = load(config_arg);
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (out_dir) cfg.out_dir = *out_dir;
    const auto outcome = speclab::run_experiment(cfg, threads.value_or(0));
    for (const auto& [name, value] : outcome.statistics) spdlog::info("{} = {:.6g}", name, value);
    for (const auto& e : outcome.errors) spdlog::error("{}", e);
    spdlog::info("{} runs, {} failed, {:.2f} s, output in {}", outcome.runs, outcome.failed_runs,
                 outcome.wall_seconds, outcome.out_dir.string());
    return outcome.ok() ? 0 : 1;
  } catch (const speclab::ConfigError& e) {
    report(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
