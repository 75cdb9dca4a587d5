#ifndef ONESHOT_TRACE_HPP_
#define ONESHOT_TRACE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/types.hpp"

namespace oneshot::sim {

enum class OpKind { post, write, read, snapshot, output };

const char* to_string(OpKind kind);

struct TraceEvent {
  int step = -1;
  ProcId proc;
  OpKind kind = OpKind::read;
  std::string array;  // "-" for output events
  Json value;
};

/// The interval of one operation-execution: from the processor's first shared
/// step (posting its id) to the step of its output. A missing end means the
/// processor participated but never output (crashed).
struct OpexInterval {
  ProcId proc;
  int start = -1;
  std::optional<int> end;
};

/// Replayable event log of one run. Events are ordered by step; an output
/// event shares the step index of the processor's final shared operation.
struct Trace {
  std::vector<TraceEvent> events;
  std::map<ProcId, OpexInterval> intervals;
  int processor_count = 0;

  /// Line-oriented dump, one event per line:
  ///   step=<k> proc=<i> op=<kind> array=<name> val=<json>
  /// The format is stable; fixture tests pin it.
  std::string dump() const;

  /// FNV-1a hash of dump(), as 16 hex digits.
  std::string digest() const;

  std::optional<Json> output_of(ProcId p) const;
};

std::string fnv1a_hex(const std::string& text);

}  // namespace oneshot::sim

#endif  // ONESHOT_TRACE_HPP_
