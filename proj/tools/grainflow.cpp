// grainflow command line: scenario runs, the built-in verification suite and
// standalone LS fits.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "grainflow/scenario.hpp"

namespace fs = std::filesystem;
using namespace grainflow;

namespace {

struct CommonOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

// Loads a config and applies command-line overrides.
ScenarioConfig load(const fs::path& path, const CommonOptions& opts, bool many) {
  ScenarioConfig cfg = parse_config_file(path);
  if (cfg.name == "scenario") cfg.name = path.stem().string();
  if (opts.out) cfg.output_dir = many ? fs::path(*opts.out) / path.stem() : fs::path(*opts.out);
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

template <class Fn>
int guarded(const std::string& label, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    spdlog::error("{}: config error [{}] {}", label, e.code(), e.what());
    return kExitConfig;
  } catch (const FlowParamError& e) {
    spdlog::error("{}: config error [{}] {}", label, e.code(), e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", label, e.what());
    return kExitAssertion;
  }
}

void report(const std::string& label, const ScenarioResult& r) {
  std::size_t failed = 0;
  for (const auto& a : r.assertions) {
    if (!a.passed) {
      ++failed;
      spdlog::warn("{}: {} failed (value {}, {} {})", label, a.name, a.value, a.relation, a.threshold);
    }
  }
  spdlog::info("{}: {} assertions, {} failed, exit {}", label, r.assertions.size(), failed,
               r.exit_code);
}

int run_configs(const std::vector<std::string>& configs, const CommonOptions& opts,
                std::size_t workers) {
  const bool many = configs.size() > 1;
  std::vector<int> codes(configs.size(), kExitPass);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      codes[i] = guarded(configs[i], [&] {
        const auto cfg = load(configs[i], opts, many);
        const auto result = run_scenario(cfg);
        report(configs[i], result);
        return result.exit_code;
      });
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, configs.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return *std::max_element(codes.begin(), codes.end());
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"grainflow: coupled grain boundary curve shortening flow and its verification"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::vector<std::string> run_configs_arg;
  std::size_t parallel = 1;
  auto* run = app.add_subcommand("run", "Run one or more scenario configs");
  run->add_option("config", run_configs_arg, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_opts.out, "Output directory (one subdirectory per config if several)");
  run->add_option("--seed", run_opts.seed, "Override the RNG seed");
  run->add_option("--parallel-sweeps", parallel, "Worker threads for independent configs")
      ->check(CLI::PositiveNumber);

  std::uint64_t suite_seed = 42;
  std::string suite_out = "verify_suite_out";
  auto* suite = app.add_subcommand("verify-suite", "Run the built-in property suite");
  suite->add_option("--seed", suite_seed, "RNG seed");
  suite->add_option("--out", suite_out, "Output directory");

  CommonOptions ls_opts;
  std::string ls_config;
  auto* ls = app.add_subcommand("ls-fit", "LS sampling and exponent regression only");
  ls->add_option("config", ls_config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  ls->add_option("--out", ls_opts.out, "Output directory");
  ls->add_option("--seed", ls_opts.seed, "Override the RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return run_configs(run_configs_arg, run_opts, parallel);
  if (*suite) {
    return guarded("verify-suite", [&] {
      const auto result = run_verify_suite(suite_seed, suite_out);
      report("verify-suite", result);
      return result.exit_code;
    });
  }
  return guarded(ls_config, [&] {
    const auto result = run_ls_fit(load(ls_config, ls_opts, false));
    report(ls_config, result);
    return result.exit_code;
  });
}
