#ifndef ONESHOT_TASK_HPP_
#define ONESHOT_TASK_HPP_

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oneshot/object_spec.hpp"
#include "oneshot/ordering.hpp"
#include "oneshot/types.hpp"

// Turns a one-shot object into a checkable task: an output tuple of
// (processor, command, response, late-snapshot) records is valid when some
// linearization explains it, namely an order of the completed records plus
// an adopted subset of the pending ones whose completed subsequence is
// well-ordered with respect to the late-snapshots and whose replay through
// the sequential object specification reproduces every completed response.
// Pending records model crashed processors whose operation became visible
// (a write another processor adopted); they contribute state changes but
// carry no response or snapshot obligations.

namespace oneshot::task {

struct OpexRecord {
  ProcId proc;
  obj::Command command;
  Json response;
  SnapshotSet late_snapshot;

  Json to_json() const {
    return Json{{"proc", proc.index},
                {"command", command.to_json()},
                {"response", response},
                {"late_snapshot", late_snapshot.to_json()}};
  }
};

struct PendingRecord {
  ProcId proc;
  obj::Command command;

  Json to_json() const { return Json{{"proc", proc.index}, {"command", command.to_json()}}; }
};

struct Verdict {
  bool valid = false;
  std::vector<ProcId> witness;  // linearization order, adopted pendings included
  std::vector<ProcId> adopted;  // pendings that appear in the witness
  std::string violation;        // explanation when invalid

  Json to_json() const;
};

inline constexpr int kDefaultTupleBound = 8;

/// Decide validity of an output tuple against an object specification.
/// Search runs backward over the completed records (a record may close the
/// remaining sequence only when its late-snapshot covers the other remaining
/// completed processors), interleaving optional pending insertions, and
/// replays each candidate order forward. Deterministic: candidates are tried
/// highest processor id first, completed before pending, and adopting fewer
/// pendings is preferred. Throws std::invalid_argument when the record count
/// exceeds the bound and std::logic_error if a found witness fails its own
/// re-check.
Verdict validate_output_tuple(const obj::ObjectStateMachine& spec,
                              const std::vector<OpexRecord>& completed,
                              const std::vector<PendingRecord>& pending,
                              int bound = kDefaultTupleBound);

/// A task as handed to a solver: fixed per-processor commands plus the
/// decision predicate over output tuples.
struct TaskSpec {
  std::map<ProcId, obj::Command> inputs;
  std::function<Verdict(const std::vector<OpexRecord>&, const std::vector<PendingRecord>&)> delta;
};

/// The task derived from a one-shot object with the given command
/// assignment; delta is validate_output_tuple against the object.
TaskSpec object_task(obj::ObjectStateMachine spec, std::map<ProcId, obj::Command> inputs,
                     int bound = kDefaultTupleBound);

/// Adaptive renaming: k participants pick distinct names in [1, 2k-1].
bool renaming_task_validator(const std::vector<std::pair<ProcId, int>>& outputs);

/// Ordered adaptive renaming: valid renaming whose name-sorted sequence of
/// (processor, snapshot) pairs is well-ordered.
bool ordered_renaming_validator(
    const std::vector<std::tuple<ProcId, int, SnapshotSet>>& outputs);

/// Swap task: each participant is handed another participant's id or null,
/// exactly one gets null, and following invoker -> returned-id edges walks a
/// single simple path through all participants ending at null.
bool swap_task_validator(const std::vector<std::pair<ProcId, Json>>& outputs);

}  // namespace oneshot::task

#endif  // ONESHOT_TASK_HPP_
