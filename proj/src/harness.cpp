#include "oneshot/harness.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace oneshot::harness {

std::string mode_name(Mode m) { return m == Mode::exhaustive ? "exhaustive" : "random"; }

Mode mode_from_name(const std::string& name) {
  if (name == "exhaustive") return Mode::exhaustive;
  if (name == "random") return Mode::random;
  throw ConfigError("unknown mode '" + name + "' (expected exhaustive or random)");
}

std::string impl_name(snapshot::SnapshotImpl impl) {
  return impl == snapshot::SnapshotImpl::primitive ? "primitive" : "collect";
}

snapshot::SnapshotImpl impl_from_name(const std::string& name) {
  if (name == "primitive") return snapshot::SnapshotImpl::primitive;
  if (name == "collect") return snapshot::SnapshotImpl::collect;
  throw ConfigError("unknown snapshot implementation '" + name +
                    "' (expected primitive or collect)");
}

Json CampaignConfig::to_json() const {
  Json procs = Json::array();
  for (const auto& [proc, cmd] : processors) {
    procs.push_back(Json{{"proc", proc.index}, {"command", cmd.to_json()}});
  }
  return Json{{"object", object},
              {"processors", procs},
              {"mode", mode_name(mode)},
              {"trials", trials},
              {"seed", seed},
              {"snapshot", impl_name(impl)},
              {"crash_exploration", crash_exploration},
              {"mutant", mwmr::mutant_name(mutant)},
              {"allow_duplicate_values", allow_duplicate_values},
              {"max_runs", max_runs},
              {"max_total_steps", max_total_steps}};
}

CampaignConfig CampaignConfig::from_json(const Json& j) {
  CampaignConfig c;
  c.object = j.value("object", c.object);
  if (j.contains("processors")) {
    for (const auto& p : j.at("processors")) {
      c.processors.emplace_back(ProcId{p.at("proc").get<int>()},
                                obj::Command::from_json(p.at("command")));
    }
  }
  c.mode = mode_from_name(j.value("mode", mode_name(c.mode)));
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.impl = impl_from_name(j.value("snapshot", impl_name(c.impl)));
  c.crash_exploration = j.value("crash_exploration", c.crash_exploration);
  c.mutant = mwmr::mutant_from_name(j.value("mutant", mwmr::mutant_name(c.mutant)));
  c.allow_duplicate_values = j.value("allow_duplicate_values", c.allow_duplicate_values);
  c.max_runs = j.value("max_runs", c.max_runs);
  c.max_total_steps = j.value("max_total_steps", c.max_total_steps);
  return c;
}

CampaignConfig mwmr_campaign(int writers, int readers) {
  CampaignConfig c;
  int next = 0;
  for (int i = 0; i < writers; ++i, ++next) {
    c.processors.emplace_back(ProcId{next}, obj::write_cmd(Json(next)));
  }
  for (int i = 0; i < readers; ++i, ++next) {
    c.processors.emplace_back(ProcId{next}, obj::read_cmd());
  }
  return c;
}

namespace {

struct Plan {
  obj::ObjectStateMachine spec;
  std::map<ProcId, obj::Command> commands;
  std::map<ProcId, sim::ProtocolFactory> protocols;
  sim::StepCounts budgets;
  sim::SharedMemory memory;
};

Plan build_plan(const CampaignConfig& config) {
  const int n = static_cast<int>(config.processors.size());
  mwmr::ProtocolSetup setup{n, config.impl, config.mutant};
  Plan plan{obj::mwmr_register_spec(), {}, {}, {}, sim::SharedMemory::with_arrays({
                                                       {mwmr::kIdArray, n},
                                                       {mwmr::kValueArray, n},
                                                   })};
  for (const auto& [proc, cmd] : config.processors) {
    plan.commands[proc] = cmd;
    if (cmd.kind == "write") {
      plan.protocols[proc] = mwmr::writer_protocol(cmd.payload, setup);
      plan.budgets[proc] = mwmr::writer_step_budget(setup);
    } else {
      plan.protocols[proc] = mwmr::reader_protocol(plan.spec.initial_state(), setup);
      plan.budgets[proc] = mwmr::reader_step_budget(setup);
    }
  }
  return plan;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

// Every step-count vector at or below the full budgets, i.e. every
// truncation point of the full schedules. Last processor varies fastest.
std::vector<sim::StepCounts> crash_vectors(const sim::StepCounts& full) {
  std::vector<sim::StepCounts> out{{}};
  for (const auto& [proc, budget] : full) {
    std::vector<sim::StepCounts> extended;
    for (const sim::StepCounts& base : out) {
      for (int c = 0; c <= budget; ++c) {
        sim::StepCounts next = base;
        next[proc] = c;
        extended.push_back(std::move(next));
      }
    }
    out = std::move(extended);
  }
  return out;
}

std::uint64_t planned_runs(const CampaignConfig& config, const Plan& plan) {
  if (config.mode == Mode::random) return static_cast<std::uint64_t>(config.trials);
  if (!config.crash_exploration) return sim::multinomial(plan.budgets);
  std::uint64_t total = 0;
  for (const sim::StepCounts& counts : crash_vectors(plan.budgets)) {
    total = saturating_add(total, sim::multinomial(counts));
  }
  return total;
}

}  // namespace

void validate_config(const CampaignConfig& config) {
  if (config.object != "mwmr") {
    try {
      obj::object_by_name(config.object);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    throw ConfigError("object '" + config.object +
                      "' has no executable protocol; campaigns support only mwmr");
  }
  if (config.processors.empty()) throw ConfigError("no processors configured");
  std::set<int> ids;
  std::set<std::string> payloads;
  int writers = 0;
  for (const auto& [proc, cmd] : config.processors) {
    if (!ids.insert(proc.index).second) {
      throw ConfigError("duplicate processor id p" + std::to_string(proc.index));
    }
    if (cmd.kind == "write") {
      ++writers;
      if (!payloads.insert(cmd.payload.dump()).second && !config.allow_duplicate_values) {
        throw ConfigError("duplicate write value " + cmd.payload.dump() +
                          " (set allow_duplicate_values to permit)");
      }
    } else if (cmd.kind != "read") {
      throw ConfigError("command '" + cmd.kind + "' is not a register command");
    }
  }
  const int n = static_cast<int>(config.processors.size());
  if (*ids.begin() != 0 || *ids.rbegin() != n - 1) {
    throw ConfigError("processor ids must be exactly 0.." + std::to_string(n - 1));
  }
  if (n > SnapshotSet::kMaxProcs) throw ConfigError("too many processors");
  if (config.mode == Mode::random) {
    if (config.trials < 0) throw ConfigError("trials must be non-negative");
    if (config.crash_exploration) {
      throw ConfigError("crash exploration requires exhaustive mode");
    }
    return;
  }
  // Exhaustive mode.
  if (config.impl != snapshot::SnapshotImpl::primitive) {
    throw ConfigError("collect snapshots are exercised under random schedules only");
  }
  Plan plan = build_plan(config);
  int total_steps = 0;
  for (const auto& [proc, budget] : plan.budgets) total_steps += budget;
  if (total_steps > config.max_total_steps) {
    throw ConfigError("schedule length " + std::to_string(total_steps) +
                      " exceeds the step cap " + std::to_string(config.max_total_steps));
  }
  std::uint64_t runs = planned_runs(config, plan);
  if (runs > config.max_runs) {
    throw ConfigError("configuration needs " + std::to_string(runs) +
                      " runs, over the cap of " + std::to_string(config.max_runs));
  }
}

namespace {

void execute_one(const Plan& plan, const CampaignConfig& config, sim::Schedule schedule,
                 const std::function<void(RunResult&)>& sink) {
  RunResult result;
  result.schedule = std::move(schedule);
  try {
    result.trace = sim::run_schedule(plan.protocols, result.schedule, plan.memory);
    result.records = mwmr::extract_records(result.trace, plan.commands);
    if (config.impl == snapshot::SnapshotImpl::collect &&
        !snapshot::verify_snapshot_linearizable(result.trace)) {
      result.verdict.valid = false;
      result.verdict.violation = "a collect-based scan returned a view that matches no cut "
                                 "inside its interval";
    } else {
      result.verdict = task::validate_output_tuple(plan.spec, result.records.completed,
                                                   result.records.pending);
    }
  } catch (const std::exception& e) {
    result.exception = true;
    result.verdict.valid = false;
    result.verdict.violation = std::string("exception: ") + e.what();
  }
  sink(result);
}

}  // namespace

void for_each_run(const CampaignConfig& config, const std::function<void(RunResult&)>& sink) {
  validate_config(config);
  Plan plan = build_plan(config);

  if (config.mode == Mode::random) {
    for (int t = 0; t < config.trials; ++t) {
      execute_one(plan, config, sim::random_schedule(plan.budgets, config.seed + t), sink);
    }
    return;
  }
  std::vector<sim::StepCounts> families =
      config.crash_exploration ? crash_vectors(plan.budgets)
                               : std::vector<sim::StepCounts>{plan.budgets};
  for (const sim::StepCounts& counts : families) {
    sim::ScheduleEnumerator en(counts, config.max_total_steps);
    while (auto schedule = en.next()) {
      execute_one(plan, config, std::move(*schedule), sink);
    }
  }
}

Json FailureEntry::to_json() const {
  return Json{{"schedule", schedule.to_json()},
              {"trace_digest", trace_digest},
              {"violation", violation}};
}

Json Report::to_json() const {
  Json f = Json::array();
  for (const FailureEntry& e : failures) f.push_back(e.to_json());
  Json w = Json::array();
  for (const Json& s : witness_samples) w.push_back(s);
  return Json{{"schema", schema},
              {"config", config.to_json()},
              {"runs_executed", runs_executed},
              {"verdicts", Json{{"valid", valid_count}, {"invalid", invalid_count}}},
              {"failures", f},
              {"witness_samples", w},
              {"pending_adoption_runs", pending_adoption_runs},
              {"wall_time_ms", wall_time_ms}};
}

Report run_campaign(const CampaignConfig& config) {
  constexpr size_t kWitnessSampleCap = 5;
  const auto started = std::chrono::steady_clock::now();
  Report report;
  report.config = config;
  for_each_run(config, [&](RunResult& r) {
    ++report.runs_executed;
    if (r.verdict.valid) {
      ++report.valid_count;
      if (report.witness_samples.size() < kWitnessSampleCap) {
        Json witness = Json::array();
        for (ProcId p : r.verdict.witness) witness.push_back(p.index);
        Json adopted = Json::array();
        for (ProcId p : r.verdict.adopted) adopted.push_back(p.index);
        report.witness_samples.push_back(Json{{"schedule", r.schedule.to_json()},
                                              {"witness", witness},
                                              {"adopted", adopted}});
      }
    } else {
      ++report.invalid_count;
      report.failures.push_back({r.schedule, r.trace.digest(), r.verdict.violation});
    }
    if (!r.verdict.adopted.empty()) ++report.pending_adoption_runs;
  });
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

ReplayResult replay_failure(const Json& report, int failure_index) {
  if (!report.contains("failures") || !report.contains("config")) {
    throw ConfigError("not a campaign report: missing failures or config");
  }
  const Json& failures = report.at("failures");
  if (failures.empty()) throw ConfigError("report contains no failures");
  if (failure_index < 0 || static_cast<size_t>(failure_index) >= failures.size()) {
    throw ConfigError("failure index " + std::to_string(failure_index) + " out of range (" +
                      std::to_string(failures.size()) + " failures)");
  }
  CampaignConfig config = CampaignConfig::from_json(report.at("config"));
  Plan plan = build_plan(config);
  ReplayResult out;
  out.schedule = sim::Schedule::from_json(failures.at(failure_index).at("schedule"));
  out.trace = sim::run_schedule(plan.protocols, out.schedule, plan.memory);
  out.trace_digest = out.trace.digest();
  auto records = mwmr::extract_records(out.trace, plan.commands);
  if (config.impl == snapshot::SnapshotImpl::collect &&
      !snapshot::verify_snapshot_linearizable(out.trace)) {
    out.verdict.valid = false;
    out.verdict.violation = "a collect-based scan returned a view that matches no cut inside "
                            "its interval";
  } else {
    out.verdict = task::validate_output_tuple(plan.spec, records.completed, records.pending);
  }
  return out;
}

}  // namespace oneshot::harness
