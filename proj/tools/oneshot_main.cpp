#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oneshot/harness.hpp"

// Exit codes: 0 all checked runs valid (or replay completed), 1 failures
// found, 2 configuration or usage error.

namespace {

int run_check(const std::string& config_path, const std::string& object, int writers,
              int readers, const std::string& mode, bool crash,
              const std::string& snapshot_impl, int trials, std::uint64_t seed,
              const std::string& mutant, const std::string& out_path) {
  namespace harness = oneshot::harness;
  harness::CampaignConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file: " << config_path << "\n";
      return 2;
    }
    config = harness::CampaignConfig::from_json(oneshot::Json::parse(in));
  } else {
    config = harness::mwmr_campaign(writers, readers);
    config.object = object;
    config.mode = harness::mode_from_name(mode);
    config.crash_exploration = crash;
    config.impl = harness::impl_from_name(snapshot_impl);
    config.trials = trials;
    config.seed = seed;
    config.mutant = oneshot::mwmr::mutant_from_name(mutant);
  }

  harness::Report report = harness::run_campaign(config);
  const std::string text = report.to_json().dump(2);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write report to " << out_path << "\n";
      return 2;
    }
    out << text << "\n";
  }
  std::cerr << "runs=" << report.runs_executed << " valid=" << report.valid_count
            << " invalid=" << report.invalid_count
            << (out_path.empty() ? "" : " report=" + out_path) << "\n";
  return report.invalid_count == 0 ? 0 : 1;
}

int run_replay(const std::string& report_path, int failure_index) {
  namespace harness = oneshot::harness;
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "cannot open report file: " << report_path << "\n";
    return 2;
  }
  harness::ReplayResult result =
      harness::replay_failure(oneshot::Json::parse(in), failure_index);
  std::cout << result.trace.dump();
  std::cout << "trace_digest=" << result.trace_digest << "\n";
  if (result.verdict.valid) {
    std::cout << "verdict=valid (replay no longer reproduces the failure)\n";
  } else {
    std::cout << "verdict=invalid\nviolation=" << result.verdict.violation << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interleaving checker for a one-shot multi-writer register"};
  app.require_subcommand(1);

  std::string config_path;
  std::string object = "mwmr";
  int writers = 2;
  int readers = 1;
  std::string mode = "exhaustive";
  bool crash = false;
  std::string snapshot_impl = "primitive";
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string mutant = "none";
  std::string out_path;

  CLI::App* check = app.add_subcommand("check", "Run a checking campaign and write a report");
  auto* config_opt =
      check->add_option("--config", config_path, "Campaign config as a JSON file");
  check->add_option("--object", object, "Object under test (only mwmr has a protocol)")
      ->excludes(config_opt);
  check->add_option("--writers", writers, "Number of writer processors")->excludes(config_opt);
  check->add_option("--readers", readers, "Number of reader processors")->excludes(config_opt);
  check->add_option("--mode", mode, "exhaustive or random")->excludes(config_opt);
  check->add_flag("--crash", crash, "Also enumerate every truncated schedule (exhaustive mode)")
      ->excludes(config_opt);
  check->add_option("--snapshot", snapshot_impl, "primitive or collect")->excludes(config_opt);
  check->add_option("--trials", trials, "Random-mode schedule count")->excludes(config_opt);
  check->add_option("--seed", seed, "Random-mode base seed")->excludes(config_opt);
  check->add_option("--mutant", mutant,
                    "Protocol mutant: none, writer_skips_early, reader_tie_lowest or "
                    "reader_late_first")
      ->excludes(config_opt);
  check->add_option("--out", out_path, "Report file (stdout when omitted)");

  std::string report_path;
  int failure_index = 0;
  CLI::App* replay = app.add_subcommand("replay", "Re-execute one recorded failure");
  replay->add_option("--report", report_path, "Report file produced by check")->required();
  replay->add_option("--failure", failure_index, "Index into the report's failures list")
      ->required();

  try {
    app.parse(argc, argv);
    if (check->parsed()) {
      return run_check(config_path, object, writers, readers, mode, crash, snapshot_impl,
                       trials, seed, mutant, out_path);
    }
    return run_replay(report_path, failure_index);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const oneshot::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
