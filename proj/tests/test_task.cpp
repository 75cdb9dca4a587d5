#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "oneshot/object_spec.hpp"
#include "oneshot/ordering.hpp"
#include "oneshot/task.hpp"

namespace {

using oneshot::Json;
using oneshot::ProcId;
using oneshot::SnapshotSet;
using namespace oneshot::obj;
using namespace oneshot::task;

// Replay a command sequence where some positions carry a required response;
// threads the full state set so non-deterministic machines are handled.
bool replay_matches(const ObjectStateMachine& spec,
                    const std::vector<std::pair<Command, std::optional<Json>>>& seq) {
  std::vector<Json> states{spec.initial_state()};
  for (const auto& [cmd, expect] : seq) {
    std::vector<Json> next;
    for (const Json& s : states) {
      for (Transition& t : spec.transition(s, cmd)) {
        if (expect && t.response != *expect) continue;
        if (std::find(next.begin(), next.end(), t.state) == next.end()) {
          next.push_back(std::move(t.state));
        }
      }
    }
    if (next.empty()) return false;
    states = std::move(next);
  }
  return true;
}

// Ground truth by sheer enumeration: every pending subset, every interleaving,
// well-ordering on the completed subsequence, replay with response filtering.
bool oracle_valid(const ObjectStateMachine& spec, const std::vector<OpexRecord>& completed,
                  const std::vector<PendingRecord>& pending) {
  const std::uint32_t subsets = 1u << pending.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    struct Item {
      bool is_pending;
      size_t idx;
    };
    std::vector<Item> items;
    for (size_t i = 0; i < completed.size(); ++i) items.push_back({false, i});
    for (size_t i = 0; i < pending.size(); ++i) {
      if (mask & (1u << i)) items.push_back({true, i});
    }
    std::vector<size_t> perm(items.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<oneshot::ordering::SnapRecord> placed;
      std::vector<std::pair<Command, std::optional<Json>>> seq;
      for (size_t k : perm) {
        const Item& it = items[k];
        if (it.is_pending) {
          seq.emplace_back(pending[it.idx].command, std::nullopt);
        } else {
          seq.emplace_back(completed[it.idx].command, completed[it.idx].response);
          placed.emplace_back(completed[it.idx].proc, completed[it.idx].late_snapshot);
        }
      }
      if (oneshot::ordering::check_well_ordering(placed) && replay_matches(spec, seq)) {
        return true;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return false;
}

// Independent soundness check of a verdict's witness.
void check_witness(const ObjectStateMachine& spec, const Verdict& verdict,
                   const std::vector<OpexRecord>& completed,
                   const std::vector<PendingRecord>& pending) {
  REQUIRE(verdict.valid);
  std::vector<oneshot::ordering::SnapRecord> placed;
  std::vector<std::pair<Command, std::optional<Json>>> seq;
  size_t adopted = 0;
  for (ProcId p : verdict.witness) {
    bool found = false;
    for (const OpexRecord& r : completed) {
      if (r.proc == p) {
        placed.emplace_back(r.proc, r.late_snapshot);
        seq.emplace_back(r.command, r.response);
        found = true;
      }
    }
    for (const PendingRecord& r : pending) {
      if (r.proc == p) {
        seq.emplace_back(r.command, std::nullopt);
        ++adopted;
        found = true;
      }
    }
    CHECK(found);
  }
  CHECK(placed.size() == completed.size());
  CHECK(adopted == verdict.adopted.size());
  CHECK(oneshot::ordering::check_well_ordering(placed));
  CHECK(replay_matches(spec, seq));
}

OpexRecord rec(int proc, Command cmd, Json response, SnapshotSet late) {
  return {ProcId{proc}, std::move(cmd), std::move(response), late};
}

}  // namespace

TEST_CASE("validate_output_tuple pinned verdicts") {
  ObjectStateMachine reg = mwmr_register_spec();

  SUBCASE("write observed by a read") {
    std::vector<OpexRecord> completed{rec(0, write_cmd(5), "ok", SnapshotSet{0}),
                                      rec(1, read_cmd(), 5, SnapshotSet{0, 1})};
    Verdict v = validate_output_tuple(reg, completed, {});
    CHECK(v.valid);
    CHECK(v.witness == std::vector<ProcId>{ProcId{0}, ProcId{1}});
    CHECK(v.adopted.empty());
    check_witness(reg, v, completed, {});
  }

  SUBCASE("a read of the initial value linearizes before the write") {
    std::vector<OpexRecord> completed{rec(0, write_cmd(5), "ok", SnapshotSet{0, 1}),
                                      rec(1, read_cmd(), Json(), SnapshotSet{1})};
    Verdict v = validate_output_tuple(reg, completed, {});
    CHECK(v.valid);
    CHECK(v.witness == std::vector<ProcId>{ProcId{1}, ProcId{0}});
    check_witness(reg, v, completed, {});
  }

  SUBCASE("a crashed writer's value is adopted as pending") {
    std::vector<OpexRecord> completed{rec(1, read_cmd(), 5, SnapshotSet{1})};
    std::vector<PendingRecord> pending{{ProcId{0}, write_cmd(5)}};
    Verdict v = validate_output_tuple(reg, completed, pending);
    CHECK(v.valid);
    CHECK(v.witness == std::vector<ProcId>{ProcId{0}, ProcId{1}});
    CHECK(v.adopted == std::vector<ProcId>{ProcId{0}});
    check_witness(reg, v, completed, pending);
  }

  SUBCASE("empty tuple is trivially valid") {
    Verdict v = validate_output_tuple(reg, {}, {});
    CHECK(v.valid);
    CHECK(v.witness.empty());
  }
}

TEST_CASE("validate_output_tuple pinned violations") {
  ObjectStateMachine reg = mwmr_register_spec();

  SUBCASE("no well-ordered ordering") {
    std::vector<OpexRecord> completed{rec(0, write_cmd(5), "ok", SnapshotSet{0}),
                                      rec(1, write_cmd(6), "ok", SnapshotSet{1})};
    Verdict v = validate_output_tuple(reg, completed, {});
    CHECK_FALSE(v.valid);
    CHECK(v.violation == "no well-ordered ordering of the completed records exists");
  }

  SUBCASE("well-ordered but replay never matches") {
    // The timing pins the p1 write before the p0 write, yet the read claims
    // p1's value.
    std::vector<OpexRecord> completed{rec(0, write_cmd(0), "ok", SnapshotSet{0, 1}),
                                      rec(1, write_cmd(1), "ok", SnapshotSet{1}),
                                      rec(2, read_cmd(), 1, SnapshotSet{0, 1, 2})};
    Verdict v = validate_output_tuple(reg, completed, {});
    CHECK_FALSE(v.valid);
    CHECK(v.violation ==
          "replay mismatch: no well-ordered ordering, with any pending adoption, reproduces "
          "the recorded responses; e.g. ordering [p1, p0, p2] replays to [\"ok\",\"ok\",0] "
          "where recorded responses are [\"ok\",\"ok\",1]");
  }

  SUBCASE("adoption cannot rescue an impossible response") {
    std::vector<OpexRecord> completed{rec(1, read_cmd(), 9, SnapshotSet{1})};
    std::vector<PendingRecord> pending{{ProcId{0}, write_cmd(5)}};
    Verdict v = validate_output_tuple(reg, completed, pending);
    CHECK_FALSE(v.valid);
    CHECK(v.violation.find("replay mismatch") == 0);
  }
}

TEST_CASE("validate_output_tuple input guards") {
  ObjectStateMachine reg = mwmr_register_spec();

  std::vector<OpexRecord> nine;
  for (int i = 0; i < 9; ++i) nine.push_back(rec(i, write_cmd(i), "ok", SnapshotSet{}));
  CHECK_THROWS_WITH_AS(validate_output_tuple(reg, nine, {}),
                       doctest::Contains("9 records, exceeding the validation bound 8"),
                       std::invalid_argument);

  std::vector<OpexRecord> three{rec(0, write_cmd(0), "ok", SnapshotSet{0, 1, 2}),
                                rec(1, write_cmd(1), "ok", SnapshotSet{0, 1, 2}),
                                rec(2, write_cmd(2), "ok", SnapshotSet{0, 1, 2})};
  CHECK_THROWS_AS(validate_output_tuple(reg, three, {}, 2), std::invalid_argument);
  CHECK(validate_output_tuple(reg, three, {}, 3).valid);

  // A processor cannot be both finished and pending.
  std::vector<OpexRecord> completed{rec(0, write_cmd(5), "ok", SnapshotSet{0})};
  std::vector<PendingRecord> pending{{ProcId{0}, write_cmd(5)}};
  CHECK_THROWS_AS(validate_output_tuple(reg, completed, pending), std::invalid_argument);
}

TEST_CASE("validate_output_tuple works with queue and swap specifications") {
  ObjectStateMachine q = queue_spec();
  std::vector<OpexRecord> deq_first{rec(0, enqueue_cmd("x"), "ok", SnapshotSet{0, 1}),
                                    rec(1, dequeue_cmd(), Json(), SnapshotSet{1})};
  Verdict v1 = validate_output_tuple(q, deq_first, {});
  CHECK(v1.valid);
  CHECK(v1.witness == std::vector<ProcId>{ProcId{1}, ProcId{0}});

  std::vector<OpexRecord> impossible{rec(0, enqueue_cmd("x"), "ok", SnapshotSet{0}),
                                     rec(1, dequeue_cmd(), "y", SnapshotSet{0, 1})};
  CHECK_FALSE(validate_output_tuple(q, impossible, {}).valid);

  ObjectStateMachine sw = swap_object_spec();
  std::vector<OpexRecord> chain{rec(0, swap_cmd(0), Json(), SnapshotSet{0}),
                                rec(1, swap_cmd(1), 0, SnapshotSet{0, 1})};
  Verdict v2 = validate_output_tuple(sw, chain, {});
  CHECK(v2.valid);
  CHECK(v2.witness == std::vector<ProcId>{ProcId{0}, ProcId{1}});
}

TEST_CASE("validator agrees with brute force on random record sets") {
  std::mt19937 rng(20250816);
  int valid_seen = 0;
  int invalid_seen = 0;

  for (int trial = 0; trial < 400; ++trial) {
    const int object = static_cast<int>(rng() % 3);
    ObjectStateMachine spec = object == 0   ? mwmr_register_spec()
                              : object == 1 ? queue_spec()
                                            : swap_object_spec();

    const int total = 1 + static_cast<int>(rng() % 5);
    const int n_pending = static_cast<int>(rng() % (total + 1)) / 2;
    const int n_completed = total - n_pending;

    std::vector<int> procs{0, 1, 2, 3, 4, 5};
    for (int i = 5; i > 0; --i) std::swap(procs[i], procs[rng() % (i + 1)]);

    auto random_command = [&]() -> Command {
      if (object == 0) return rng() % 2 ? write_cmd(static_cast<int>(rng() % 3)) : read_cmd();
      if (object == 1) {
        return rng() % 2 ? enqueue_cmd(static_cast<int>(rng() % 3)) : dequeue_cmd();
      }
      return swap_cmd(static_cast<int>(rng() % 6));
    };
    auto random_response = [&](const Command& cmd) -> Json {
      // Mostly the plausible response kind, sometimes junk, to mix verdicts.
      if (rng() % 5 == 0) return static_cast<int>(rng() % 3);
      if (cmd.kind == "write" || cmd.kind == "enqueue") return "ok";
      if (rng() % 3 == 0) return Json();
      return static_cast<int>(rng() % 3);
    };

    std::vector<OpexRecord> completed;
    for (int i = 0; i < n_completed; ++i) {
      SnapshotSet snap;
      for (int b = 0; b < 6; ++b)
        if (rng() % 2) snap.add(ProcId{b});
      Command cmd = random_command();
      Json response = random_response(cmd);
      completed.push_back(rec(procs[static_cast<size_t>(i)], cmd, response, snap));
    }
    std::vector<PendingRecord> pending;
    for (int i = 0; i < n_pending; ++i) {
      pending.push_back({ProcId{procs[static_cast<size_t>(n_completed + i)]}, random_command()});
    }

    Verdict v = validate_output_tuple(spec, completed, pending);
    CHECK(v.valid == oracle_valid(spec, completed, pending));
    if (v.valid) {
      check_witness(spec, v, completed, pending);
      ++valid_seen;
    } else {
      ++invalid_seen;
    }
  }

  // The generator must exercise both outcomes for the agreement to mean much.
  CHECK(valid_seen > 40);
  CHECK(invalid_seen > 40);
}

TEST_CASE("object_task packages inputs with the validator") {
  std::map<ProcId, Command> inputs{{ProcId{0}, write_cmd(7)}, {ProcId{1}, read_cmd()}};
  TaskSpec task = object_task(mwmr_register_spec(), inputs);
  CHECK(task.inputs.size() == 2);

  Verdict good = task.delta({rec(0, write_cmd(7), "ok", SnapshotSet{0}),
                             rec(1, read_cmd(), 7, SnapshotSet{0, 1})},
                            {});
  CHECK(good.valid);
  Verdict bad = task.delta({rec(0, write_cmd(7), "ok", SnapshotSet{0}),
                            rec(1, read_cmd(), 9, SnapshotSet{0, 1})},
                           {});
  CHECK_FALSE(bad.valid);
}

TEST_CASE("renaming validator") {
  CHECK(renaming_task_validator({{ProcId{0}, 1}}));
  CHECK(renaming_task_validator({{ProcId{0}, 2}, {ProcId{1}, 3}}));
  CHECK_FALSE(renaming_task_validator({{ProcId{0}, 2}, {ProcId{1}, 2}}));
  CHECK_FALSE(renaming_task_validator({{ProcId{0}, 4}, {ProcId{1}, 1}}));
  CHECK_FALSE(renaming_task_validator({{ProcId{0}, 0}}));
  CHECK_FALSE(renaming_task_validator({{ProcId{0}, 2}}));
  CHECK(renaming_task_validator({{ProcId{0}, 1}, {ProcId{1}, 2}, {ProcId{2}, 5}}));
  CHECK_FALSE(renaming_task_validator({{ProcId{0}, 1}, {ProcId{1}, 2}, {ProcId{2}, 6}}));
}

TEST_CASE("ordered renaming validator") {
  CHECK(ordered_renaming_validator({{ProcId{0}, 1, SnapshotSet{0}},
                                    {ProcId{1}, 3, SnapshotSet{0, 1}}}));
  CHECK_FALSE(ordered_renaming_validator({{ProcId{0}, 3, SnapshotSet{0}},
                                          {ProcId{1}, 1, SnapshotSet{0, 1}}}));
  CHECK(ordered_renaming_validator({{ProcId{2}, 1, SnapshotSet{2}}}));

  // Fails the plain renaming range even though the order is fine.
  CHECK_FALSE(ordered_renaming_validator({{ProcId{0}, 1, SnapshotSet{0}},
                                          {ProcId{1}, 4, SnapshotSet{0, 1}}}));

  // Input order is irrelevant; the name order decides.
  CHECK(ordered_renaming_validator({{ProcId{1}, 3, SnapshotSet{0, 1}},
                                    {ProcId{0}, 1, SnapshotSet{0}}}));
}

TEST_CASE("swap task validator") {
  CHECK(swap_task_validator({{ProcId{0}, Json()}}));
  CHECK(swap_task_validator({{ProcId{0}, Json()}, {ProcId{1}, 0}}));
  CHECK_FALSE(swap_task_validator({{ProcId{0}, Json()}, {ProcId{1}, Json()}}));
  CHECK_FALSE(swap_task_validator({{ProcId{0}, 1}, {ProcId{1}, 0}}));

  // Off-path cycle: p0 ends immediately, p1 and p2 point at each other.
  CHECK_FALSE(swap_task_validator({{ProcId{0}, Json()}, {ProcId{1}, 2}, {ProcId{2}, 1}}));
  // Duplicate return value.
  CHECK_FALSE(swap_task_validator({{ProcId{0}, Json()}, {ProcId{1}, 0}, {ProcId{2}, 0}}));
  // Returned id outside the participant set.
  CHECK_FALSE(swap_task_validator({{ProcId{0}, Json()}, {ProcId{1}, 9}}));
  // Full three-processor path p2 -> p1 -> p0 -> null.
  CHECK(swap_task_validator({{ProcId{0}, Json()}, {ProcId{1}, 0}, {ProcId{2}, 1}}));
}
