#include "oneshot/simulator.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace oneshot::sim {

namespace {

struct ProcState {
  std::unique_ptr<ProcContext> ctx;
  ProtocolRun run;
  bool output_logged = false;
};

}  // namespace

Trace run_schedule(const std::map<ProcId, ProtocolFactory>& protocols,
                   const Schedule& schedule, SharedMemory memory) {
  Trace trace;
  int max_index = -1;
  for (const auto& [proc, factory] : protocols) max_index = std::max(max_index, proc.index);
  trace.processor_count = max_index + 1;

  std::map<ProcId, ProcState> states;
  for (const auto& [proc, factory] : protocols) {
    ProcState state;
    state.ctx = std::make_unique<ProcContext>(proc);
    state.ctx->attach_trace(&trace);
    state.run = factory(*state.ctx);  // runs eagerly to the first operation
    state.run.rethrow_if_failed();
    if (state.run.completed()) {
      throw std::invalid_argument("protocol for p" + std::to_string(proc.index) +
                                  " completed without any shared-memory operation");
    }
    states.emplace(proc, std::move(state));
  }

  for (int step = 0; step < static_cast<int>(schedule.steps.size()); ++step) {
    ProcId proc = schedule.steps[step];
    auto it = states.find(proc);
    if (it == states.end()) {
      throw std::invalid_argument("schedule names processor p" + std::to_string(proc.index) +
                                  " which has no protocol");
    }
    ProcState& state = it->second;
    if (state.run.completed()) continue;  // crashed/finished processor idles
    if (!state.ctx->has_pending()) {
      throw std::logic_error("processor p" + std::to_string(proc.index) +
                             " is scheduled but has no pending operation");
    }

    if (!trace.intervals.count(proc)) trace.intervals[proc] = {proc, step, std::nullopt};

    PendingOp op = state.ctx->take_pending();
    OpResult result;
    switch (op.kind) {
      case OpKind::post:
      case OpKind::write:
        memory.write_cell(op.array, proc, op.cell, op.value, step);
        trace.events.push_back({step, proc, op.kind, op.array, op.value});
        break;
      case OpKind::read: {
        const auto& cell = memory.read_cell(op.array, op.cell);
        result.value = cell ? *cell : Json();
        trace.events.push_back(
            {step, proc, OpKind::read, op.array, Json{{"cell", op.cell}, {"value", result.value}}});
        break;
      }
      case OpKind::snapshot: {
        result.view = SnapshotView{op.array, memory.array(op.array), step, step};
        trace.events.push_back({step, proc, OpKind::snapshot, op.array,
                                Json{{"begin", step}, {"cells", cells_to_json(result.view.cells)}}});
        break;
      }
      case OpKind::output:
        throw std::logic_error("output is not an executable operation");
    }

    state.ctx->deliver(std::move(result), step);
    state.ctx->resume_point().resume();
    state.run.rethrow_if_failed();

    if (state.run.completed() && !state.output_logged) {
      // The output is announced together with the final operation, so it
      // shares that operation's step index.
      trace.events.push_back({step, proc, OpKind::output, "-", state.run.output()});
      trace.intervals[proc].end = step;
      state.output_logged = true;
    }
  }

  return trace;
}

}  // namespace oneshot::sim
