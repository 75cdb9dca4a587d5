#include "oneshot/snapshot.hpp"

#include <map>
#include <utility>
#include <vector>

namespace oneshot::snapshot {

using sim::TraceEvent;
using sim::cells_from_json;
using sim::cells_to_json;

namespace {

// One pass of plain reads over the array. Returns the cells and the step
// index of the first read, which anchors the enclosing scan's interval.
sim::SubTask<std::pair<Cells, int>> collect_once(sim::ProcContext& ctx, std::string array,
                                                 int n_cells) {
  Cells out(static_cast<size_t>(n_cells));
  int first_step = -1;
  for (int i = 0; i < n_cells; ++i) {
    Json v = co_await ctx.read(array, ProcId{i});
    if (first_step < 0) first_step = ctx.last_step();
    if (!v.is_null()) out[static_cast<size_t>(i)] = std::move(v);
  }
  co_return std::pair{std::move(out), first_step};
}

}  // namespace

sim::SubTask<SnapshotView> collect_scan(sim::ProcContext& ctx, std::string array, int n_cells) {
  auto [prev, begin] = co_await collect_once(ctx, array, n_cells);
  std::vector<int> changes(static_cast<size_t>(n_cells), 0);
  for (;;) {
    auto [cur, ignored] = co_await collect_once(ctx, array, n_cells);
    if (cur == prev) {
      SnapshotView view{array, cur, begin, ctx.last_step()};
      ctx.emit_snapshot_event(view);
      co_return view;
    }
    for (size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == prev[i]) continue;
      if (++changes[i] >= 2) {
        // Cell i moved twice, so its writer ran a complete update inside
        // this scan; that update's embedded scan is a valid view here.
        SnapshotView view{array, cells_from_json(cur[i]->at("emb")), begin, ctx.last_step()};
        ctx.emit_snapshot_event(view);
        co_return view;
      }
    }
    prev = std::move(cur);
  }
}

sim::SubTask<void> collect_update(sim::ProcContext& ctx, std::string array, int n_cells,
                                  OpKind kind, Json value) {
  SnapshotView scan = co_await collect_scan(ctx, array, n_cells);
  Json tagged{{"v", std::move(value)}, {"seq", ctx.next_seq(array)}, {"emb", cells_to_json(scan.cells)}};
  if (kind == OpKind::post) {
    co_await ctx.post(std::move(array), std::move(tagged));
  } else {
    co_await ctx.write(std::move(array), std::move(tagged));
  }
}

Cells untag(const Cells& tagged) {
  Cells out(tagged.size());
  for (size_t i = 0; i < tagged.size(); ++i) {
    if (tagged[i]) out[i] = tagged[i]->at("v");
  }
  return out;
}

sim::SubTask<SnapshotView> take_snapshot(sim::ProcContext& ctx, std::string array, int n_cells,
                                         SnapshotImpl impl) {
  if (impl == SnapshotImpl::primitive) {
    co_return co_await ctx.snapshot(std::move(array));
  }
  SnapshotView tagged = co_await collect_scan(ctx, std::move(array), n_cells);
  co_return SnapshotView{tagged.array, untag(tagged.cells), tagged.begin_step, tagged.end_step};
}

sim::SubTask<void> publish(sim::ProcContext& ctx, std::string array, int n_cells,
                           SnapshotImpl impl, OpKind kind, Json value) {
  if (impl == SnapshotImpl::primitive) {
    if (kind == OpKind::post) {
      co_await ctx.post(std::move(array), std::move(value));
    } else {
      co_await ctx.write(std::move(array), std::move(value));
    }
    co_return;
  }
  co_await collect_update(ctx, std::move(array), n_cells, kind, std::move(value));
}

namespace {

void apply_write(Cells& content, int cell, const Json& value) {
  if (static_cast<size_t>(cell) >= content.size()) content.resize(static_cast<size_t>(cell) + 1);
  content[static_cast<size_t>(cell)] = value;
}

}  // namespace

bool verify_snapshot_linearizable(const Trace& trace) {
  struct WriteEvent {
    int step;
    int cell;
    Json value;
  };
  std::map<std::string, std::vector<WriteEvent>> writes;
  for (const TraceEvent& ev : trace.events) {
    if (ev.kind == OpKind::post || ev.kind == OpKind::write) {
      writes[ev.array].push_back({ev.step, ev.proc.index, ev.value});
    }
  }

  for (const TraceEvent& ev : trace.events) {
    if (ev.kind != OpKind::snapshot) continue;
    const int begin = ev.value.at("begin").get<int>();
    Cells viewed = cells_from_json(ev.value.at("cells"));

    Cells content(viewed.size());
    const auto& ws = writes[ev.array];
    size_t next = 0;
    while (next < ws.size() && ws[next].step <= begin) {
      apply_write(content, ws[next].cell, ws[next].value);
      ++next;
    }
    viewed.resize(std::max(viewed.size(), content.size()));
    bool found = content == viewed;
    // Advance through each write inside the span; the view must match the
    // contents at some such cut.
    while (!found && next < ws.size() && ws[next].step <= ev.step) {
      apply_write(content, ws[next].cell, ws[next].value);
      ++next;
      viewed.resize(std::max(viewed.size(), content.size()));
      found = content == viewed;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace oneshot::snapshot
