#ifndef ONESHOT_SIMULATOR_HPP_
#define ONESHOT_SIMULATOR_HPP_

#include <map>

#include "oneshot/memory.hpp"
#include "oneshot/protocol.hpp"
#include "oneshot/schedule.hpp"
#include "oneshot/trace.hpp"

namespace oneshot::sim {

/// Run one interleaving to completion. Each schedule step executes exactly
/// one shared-memory operation of the named processor and then resumes its
/// protocol up to the next operation (or completion). A processor's output
/// is recorded at the step index of its final operation. Steps scheduled
/// for an already-completed processor are no-ops, so truncated or padded
/// schedules model crashes and idling directly.
///
/// Throws std::invalid_argument if the schedule names a processor with no
/// protocol, or if a protocol completes without performing any shared
/// operation. Rethrows protocol exceptions (e.g. SingleWriterViolation).
Trace run_schedule(const std::map<ProcId, ProtocolFactory>& protocols,
                   const Schedule& schedule, SharedMemory memory);

}  // namespace oneshot::sim

#endif  // ONESHOT_SIMULATOR_HPP_
