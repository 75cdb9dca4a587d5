#ifndef ONESHOT_PROTOCOL_HPP_
#define ONESHOT_PROTOCOL_HPP_

#include <coroutine>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "oneshot/memory.hpp"
#include "oneshot/trace.hpp"
#include "oneshot/types.hpp"

// Protocols are coroutines driven by the scheduler one shared-memory
// operation per resume. Awaiting ctx.post/write/read/snapshot parks the
// processor with a pending operation; the scheduler executes that operation
// at the scheduled step and resumes the coroutine with the result. Local
// computation between awaits therefore executes atomically with the
// preceding shared step. SubTask lets protocol subroutines (e.g. a
// collect-based scan) suspend through their caller.

namespace oneshot::sim {

struct PendingOp {
  OpKind kind = OpKind::read;
  std::string array;
  int cell = -1;  // read target
  Json value;     // post/write payload
};

struct OpResult {
  Json value;
  SnapshotView view;
};

class ProcContext {
 public:
  explicit ProcContext(ProcId self) : self_(self) {}
  ProcContext(const ProcContext&) = delete;
  ProcContext& operator=(const ProcContext&) = delete;

  ProcId self() const { return self_; }

  /// Step index of the most recently executed operation of this processor.
  int last_step() const { return last_step_; }

  struct OpAwaiterBase {
    ProcContext& ctx;
    PendingOp op;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept {
      ctx.pending_ = std::move(op);
      ctx.has_pending_ = true;
      ctx.resume_point_ = h;
    }
  };
  struct VoidOp : OpAwaiterBase {
    void await_resume() const noexcept {}
  };
  struct ReadOp : OpAwaiterBase {
    Json await_resume() { return std::move(ctx.delivered_.value); }
  };
  struct SnapOp : OpAwaiterBase {
    SnapshotView await_resume() { return std::move(ctx.delivered_.view); }
  };

  /// Register in shared memory: write own cell, logged as a post.
  VoidOp post(std::string array, Json v) {
    return {{*this, {OpKind::post, std::move(array), self_.index, std::move(v)}}};
  }
  /// Write own cell.
  VoidOp write(std::string array, Json v) {
    return {{*this, {OpKind::write, std::move(array), self_.index, std::move(v)}}};
  }
  /// Read one cell; empty cells read as JSON null.
  ReadOp read(std::string array, ProcId cell) {
    return {{*this, {OpKind::read, std::move(array), cell.index, Json()}}};
  }
  /// One-step atomic snapshot of a whole array.
  SnapOp snapshot(std::string array) {
    return {{*this, {OpKind::snapshot, std::move(array), -1, Json()}}};
  }

  /// Per-array monotone sequence counter for collect-based updates.
  int next_seq(const std::string& array) { return ++seq_[array]; }

  /// Log a completed collect-based scan as a snapshot event at the current
  /// step, so the trace carries every returned view for post-hoc checking.
  void emit_snapshot_event(const SnapshotView& view) {
    trace_->events.push_back({last_step_, self_, OpKind::snapshot, view.array,
                              Json{{"begin", view.begin_step}, {"cells", cells_to_json(view.cells)}}});
  }

  // Scheduler side.
  bool has_pending() const { return has_pending_; }
  PendingOp take_pending() {
    has_pending_ = false;
    return std::move(pending_);
  }
  void deliver(OpResult r, int step) {
    delivered_ = std::move(r);
    last_step_ = step;
  }
  std::coroutine_handle<> resume_point() const { return resume_point_; }
  void attach_trace(Trace* trace) { trace_ = trace; }

 private:
  ProcId self_;
  PendingOp pending_;
  bool has_pending_ = false;
  OpResult delivered_;
  std::coroutine_handle<> resume_point_;
  int last_step_ = -1;
  std::map<std::string, int> seq_;
  Trace* trace_ = nullptr;
};

/// Owning handle for one processor's protocol coroutine. The coroutine runs
/// eagerly to its first shared operation at construction; co_return publishes
/// the processor's output value.
class ProtocolRun {
 public:
  struct promise_type {
    Json output;
    bool completed = false;
    std::exception_ptr error;

    ProtocolRun get_return_object() {
      return ProtocolRun(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_never initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_value(Json out) {
      output = std::move(out);
      completed = true;
    }
    void unhandled_exception() { error = std::current_exception(); }
  };

  ProtocolRun() = default;
  ProtocolRun(ProtocolRun&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  ProtocolRun& operator=(ProtocolRun&& other) noexcept {
    if (this != &other) {
      if (handle_) handle_.destroy();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  ProtocolRun(const ProtocolRun&) = delete;
  ProtocolRun& operator=(const ProtocolRun&) = delete;
  ~ProtocolRun() {
    if (handle_) handle_.destroy();
  }

  bool completed() const { return handle_.promise().completed; }
  const Json& output() const { return handle_.promise().output; }
  void rethrow_if_failed() const {
    if (handle_.promise().error) std::rethrow_exception(handle_.promise().error);
  }

 private:
  explicit ProtocolRun(std::coroutine_handle<promise_type> h) : handle_(h) {}
  std::coroutine_handle<promise_type> handle_;
};

using ProtocolFactory = std::function<ProtocolRun(ProcContext&)>;

/// Awaitable subroutine for protocol code. Lazy: starts when awaited, and
/// hands control back to the awaiting coroutine on completion via symmetric
/// transfer, so primitive-operation suspensions anywhere in the call chain
/// park the whole processor.
template <typename T>
class SubTask {
 public:
  struct promise_type {
    std::optional<T> value;
    std::exception_ptr error;
    std::coroutine_handle<> continuation;

    SubTask get_return_object() {
      return SubTask(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    struct FinalAwaiter {
      bool await_ready() const noexcept { return false; }
      std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
        auto cont = h.promise().continuation;
        return cont ? cont : std::noop_coroutine();
      }
      void await_resume() const noexcept {}
    };
    FinalAwaiter final_suspend() noexcept { return {}; }
    void return_value(T v) { value = std::move(v); }
    void unhandled_exception() { error = std::current_exception(); }
  };

  SubTask(SubTask&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  SubTask(const SubTask&) = delete;
  ~SubTask() {
    if (handle_) handle_.destroy();
  }

  bool await_ready() const noexcept { return false; }
  std::coroutine_handle<> await_suspend(std::coroutine_handle<> h) noexcept {
    handle_.promise().continuation = h;
    return handle_;
  }
  T await_resume() {
    if (handle_.promise().error) std::rethrow_exception(handle_.promise().error);
    return std::move(*handle_.promise().value);
  }

 private:
  explicit SubTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
  std::coroutine_handle<promise_type> handle_;
};

template <>
class SubTask<void> {
 public:
  struct promise_type {
    std::exception_ptr error;
    std::coroutine_handle<> continuation;

    SubTask get_return_object() {
      return SubTask(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    struct FinalAwaiter {
      bool await_ready() const noexcept { return false; }
      std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
        auto cont = h.promise().continuation;
        return cont ? cont : std::noop_coroutine();
      }
      void await_resume() const noexcept {}
    };
    FinalAwaiter final_suspend() noexcept { return {}; }
    void return_void() {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  SubTask(SubTask&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  SubTask(const SubTask&) = delete;
  ~SubTask() {
    if (handle_) handle_.destroy();
  }

  bool await_ready() const noexcept { return false; }
  std::coroutine_handle<> await_suspend(std::coroutine_handle<> h) noexcept {
    handle_.promise().continuation = h;
    return handle_;
  }
  void await_resume() {
    if (handle_.promise().error) std::rethrow_exception(handle_.promise().error);
  }

 private:
  explicit SubTask(std::coroutine_handle<promise_type> h) : handle_(h) {}
  std::coroutine_handle<promise_type> handle_;
};

}  // namespace oneshot::sim

#endif  // ONESHOT_PROTOCOL_HPP_
