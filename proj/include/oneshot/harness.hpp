#ifndef ONESHOT_HARNESS_HPP_
#define ONESHOT_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oneshot/mwmr.hpp"
#include "oneshot/object_spec.hpp"
#include "oneshot/schedule.hpp"
#include "oneshot/simulator.hpp"
#include "oneshot/snapshot.hpp"
#include "oneshot/task.hpp"

// Checking campaigns over the register protocol: enumerate or sample
// schedules, run them, extract records, validate each output tuple and
// aggregate into a deterministic JSON report. Crash exploration enumerates
// every per-processor step-count vector below the full budgets, which is
// exactly the set of distinct prefixes of the full schedules.

namespace oneshot::harness {

using sim::Trace;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { exhaustive, random };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);
std::string impl_name(snapshot::SnapshotImpl impl);
snapshot::SnapshotImpl impl_from_name(const std::string& name);

struct CampaignConfig {
  std::string object = "mwmr";
  std::vector<std::pair<ProcId, obj::Command>> processors;
  Mode mode = Mode::exhaustive;
  int trials = 1000;              // random mode
  std::uint64_t seed = 0;         // random mode
  snapshot::SnapshotImpl impl = snapshot::SnapshotImpl::primitive;
  bool crash_exploration = false;
  mwmr::Mutant mutant = mwmr::Mutant::none;
  bool allow_duplicate_values = false;
  std::uint64_t max_runs = 5'000'000;
  int max_total_steps = sim::ScheduleEnumerator::kDefaultStepCap;

  Json to_json() const;
  static CampaignConfig from_json(const Json& j);
};

/// The standard configuration: `writers` writers each writing its own
/// processor index, then `readers` readers.
CampaignConfig mwmr_campaign(int writers, int readers);

/// Throws ConfigError explaining the first rule the config breaks.
void validate_config(const CampaignConfig& config);

struct FailureEntry {
  sim::Schedule schedule;
  std::string trace_digest;
  std::string violation;

  Json to_json() const;
};

struct Report {
  int schema = 1;
  CampaignConfig config;
  std::uint64_t runs_executed = 0;
  std::uint64_t valid_count = 0;
  std::uint64_t invalid_count = 0;
  std::vector<FailureEntry> failures;
  std::vector<Json> witness_samples;
  std::uint64_t pending_adoption_runs = 0;
  double wall_time_ms = 0.0;

  Json to_json() const;
};

struct RunResult {
  sim::Schedule schedule;
  Trace trace;
  mwmr::ExtractedRecords records;
  task::Verdict verdict;
  bool exception = false;  // verdict.violation carries the message
};

/// Run every schedule the config calls for, in deterministic order, passing
/// each outcome to the sink. Per-run failures of any kind (including
/// internal errors) are reported as invalid results, never skipped.
void for_each_run(const CampaignConfig& config, const std::function<void(RunResult&)>& sink);

Report run_campaign(const CampaignConfig& config);

struct ReplayResult {
  sim::Schedule schedule;
  Trace trace;
  task::Verdict verdict;
  std::string trace_digest;
};

/// Re-execute the indexed failure of a previously written report. Throws
/// ConfigError when the report has no such failure.
ReplayResult replay_failure(const Json& report, int failure_index);

}  // namespace oneshot::harness

#endif  // ONESHOT_HARNESS_HPP_
