#ifndef ONESHOT_SNAPSHOT_HPP_
#define ONESHOT_SNAPSHOT_HPP_

#include <string>

#include "oneshot/memory.hpp"
#include "oneshot/protocol.hpp"
#include "oneshot/trace.hpp"
#include "oneshot/types.hpp"

// Two interchangeable snapshot facilities for protocol code:
//
//   primitive  - the simulator copies a whole array in one scheduler step,
//                so the view's linearization point is that step itself;
//   collect    - classical wait-free double collect over plain reads. Every
//                update tags its value with a per-processor sequence number
//                and the updater's own latest scan; a scanner that sees two
//                equal adjacent collects returns them, and one that watches
//                some cell change twice borrows that cell's embedded scan,
//                which must have completed inside the scanner's interval.
//
// Collect-mode cells in memory are objects {"v": value, "seq": n, "emb":
// cells}; untag projects a tagged view back to plain values. Every completed
// scan is logged as a snapshot trace event carrying its first-read step, so
// verify_snapshot_linearizable can search for a linearization cut afterwards.

namespace oneshot::snapshot {

using sim::Cells;
using sim::OpKind;
using sim::SnapshotView;
using sim::Trace;

enum class SnapshotImpl { primitive, collect };

/// Wait-free scan of a collect-mode array. Returned cells are tagged.
sim::SubTask<SnapshotView> collect_scan(sim::ProcContext& ctx, std::string array, int n_cells);

/// Scan-then-write update of the caller's own cell in a collect-mode array.
/// `kind` selects post vs write for the trace.
sim::SubTask<void> collect_update(sim::ProcContext& ctx, std::string array, int n_cells,
                                  OpKind kind, Json value);

/// Project a tagged view's cells to the logical values.
Cells untag(const Cells& tagged);

/// Snapshot under the chosen implementation; cells are logical values.
sim::SubTask<SnapshotView> take_snapshot(sim::ProcContext& ctx, std::string array, int n_cells,
                                         SnapshotImpl impl);

/// Write the caller's own cell under the chosen implementation.
sim::SubTask<void> publish(sim::ProcContext& ctx, std::string array, int n_cells,
                           SnapshotImpl impl, OpKind kind, Json value);

/// True iff every snapshot event in the trace can be assigned a cut inside
/// its [begin, step] span at which the array contents (reconstructed from
/// the trace's post/write events, arrays starting empty) equal the view.
bool verify_snapshot_linearizable(const Trace& trace);

}  // namespace oneshot::snapshot

#endif  // ONESHOT_SNAPSHOT_HPP_
