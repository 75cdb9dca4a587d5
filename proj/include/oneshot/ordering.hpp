#ifndef ONESHOT_ORDERING_HPP_
#define ONESHOT_ORDERING_HPP_

#include <set>
#include <utility>
#include <vector>

#include "oneshot/trace.hpp"
#include "oneshot/types.hpp"

// Timing structure of runs. happened_before lifts a trace's opex intervals
// to a strict partial order on processors. check_well_ordering decides the
// suffix-containment predicate on (processor, snapshot) sequences: at every
// position, the intersection of the snapshots from there on must contain
// all earlier processors. well_ordered_permutations enumerates the orders
// passing that predicate without filtering all permutations: a record can
// sit last among a remaining set only if its snapshot covers the rest, and
// that choice is exact, so the recursion never explores a dead branch.

namespace oneshot::ordering {

using sim::Trace;

struct HappenedBefore {
  std::set<std::pair<ProcId, ProcId>> pairs;

  bool precedes(ProcId a, ProcId b) const { return pairs.count({a, b}) > 0; }
};

using SnapRecord = std::pair<ProcId, SnapshotSet>;

/// (i, j) present iff i's opex ended strictly before j's started.
/// Opexes without an end step precede nothing.
HappenedBefore happened_before(const Trace& trace);

/// True iff for every 1-based position k, the intersection of snapshots at
/// positions >= k contains every processor at positions < k. Sequences of
/// length 0 or 1 pass vacuously. The predicate does not require a record's
/// snapshot to contain its own processor.
bool check_well_ordering(const std::vector<SnapRecord>& seq);

inline constexpr int kDefaultPermutationBound = 8;

/// All permutations of the records passing check_well_ordering, built
/// backward: highest-ProcId eligible record first at each placement, so the
/// result order is deterministic. Throws std::invalid_argument when the
/// record count exceeds the bound.
std::vector<std::vector<ProcId>> well_ordered_permutations(
    const std::vector<SnapRecord>& records, int bound = kDefaultPermutationBound);

/// True iff no pair (i, j) of hb with both endpoints present in seq has j
/// placed before i.
bool consistent_with(const std::vector<ProcId>& seq, const HappenedBefore& hb);

}  // namespace oneshot::ordering

#endif  // ONESHOT_ORDERING_HPP_
