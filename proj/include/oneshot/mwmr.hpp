#ifndef ONESHOT_MWMR_HPP_
#define ONESHOT_MWMR_HPP_

#include <map>
#include <string>
#include <vector>

#include "oneshot/memory.hpp"
#include "oneshot/object_spec.hpp"
#include "oneshot/protocol.hpp"
#include "oneshot/snapshot.hpp"
#include "oneshot/task.hpp"
#include "oneshot/trace.hpp"
#include "oneshot/types.hpp"

// One-shot multi-writer register built from two single-writer arrays plus
// snapshots. A writer posts its id, snapshots Id into early, writes (value,
// early) to its Value cell, snapshots Id into late and outputs (ok, late).
// A reader posts its id, snapshots Value, adopts the cell with the largest
// early set (ties to the highest writer id, an unwritten register counts as
// a virtual cell with empty early and id -1), snapshots Id into late and
// outputs (value, late). Three deliberately broken variants are provided
// for validating the checker: a writer that publishes an empty early set in
// three steps, a reader that prefers the lowest id when equal-size early
// sets differ, and a reader that takes its late snapshot before looking at
// Value.

namespace oneshot::mwmr {

using sim::Cells;
using sim::OpKind;
using sim::Trace;

inline constexpr const char* kIdArray = "Id";
inline constexpr const char* kValueArray = "Value";

enum class Mutant { none, writer_skips_early, reader_tie_lowest, reader_late_first };

std::string mutant_name(Mutant m);
Mutant mutant_from_name(const std::string& name);

/// One entry a reader can adopt; id -1 is the virtual initial cell.
struct Candidate {
  int id = -1;
  Json value;
  SnapshotSet early;
};

/// The reader's selection rule: maximize (|early|, id) over the written
/// cells of a Value view, falling back to the initial value.
Candidate select_latest(const Cells& value_view, const Json& initial_value);

/// Selection as performed by the configured mutant (honest for mutants that
/// do not touch selection).
Candidate select_for_mutant(const Cells& value_view, const Json& initial_value, Mutant m);

struct ProtocolSetup {
  int n_procs = 0;
  snapshot::SnapshotImpl impl = snapshot::SnapshotImpl::primitive;
  Mutant mutant = Mutant::none;
};

sim::ProtocolFactory writer_protocol(Json value, ProtocolSetup setup);
sim::ProtocolFactory reader_protocol(Json initial_value, ProtocolSetup setup);

/// Worst-case shared steps until output, for building schedules. Exact for
/// the primitive snapshot; an upper bound under collect (surplus scheduler
/// steps are no-ops).
int writer_step_budget(const ProtocolSetup& setup);
int reader_step_budget(const ProtocolSetup& setup);

struct ExtractedRecords {
  std::vector<task::OpexRecord> completed;
  std::vector<task::PendingRecord> pending;
};

/// Completed records from the trace's outputs; crashed processors whose
/// Value write landed become pending records, other crashes are invisible
/// to the object and dropped.
ExtractedRecords extract_records(const Trace& trace,
                                 const std::map<ProcId, obj::Command>& commands);

}  // namespace oneshot::mwmr

#endif  // ONESHOT_MWMR_HPP_
