#include "oneshot/mwmr.hpp"

#include <stdexcept>
#include <utility>

namespace oneshot::mwmr {

using sim::TraceEvent;

std::string mutant_name(Mutant m) {
  switch (m) {
    case Mutant::none: return "none";
    case Mutant::writer_skips_early: return "writer_skips_early";
    case Mutant::reader_tie_lowest: return "reader_tie_lowest";
    case Mutant::reader_late_first: return "reader_late_first";
  }
  return "none";
}

Mutant mutant_from_name(const std::string& name) {
  if (name == "none") return Mutant::none;
  if (name == "writer_skips_early") return Mutant::writer_skips_early;
  if (name == "reader_tie_lowest") return Mutant::reader_tie_lowest;
  if (name == "reader_late_first") return Mutant::reader_late_first;
  throw std::invalid_argument("unknown mutant '" + name +
                              "' (expected none, writer_skips_early, reader_tie_lowest or "
                              "reader_late_first)");
}

namespace {

std::vector<Candidate> view_candidates(const Cells& value_view) {
  std::vector<Candidate> out;
  for (size_t i = 0; i < value_view.size(); ++i) {
    if (!value_view[i]) continue;
    out.push_back({static_cast<int>(i), value_view[i]->at("value"),
                   SnapshotSet::from_json(value_view[i]->at("early"))});
  }
  return out;
}

bool honest_beats(const Candidate& challenger, const Candidate& best) {
  if (challenger.early.size() != best.early.size()) {
    return challenger.early.size() > best.early.size();
  }
  return challenger.id > best.id;
}

}  // namespace

Candidate select_latest(const Cells& value_view, const Json& initial_value) {
  Candidate best{-1, initial_value, {}};
  for (const Candidate& c : view_candidates(value_view)) {
    if (honest_beats(c, best)) best = c;
  }
  return best;
}

Candidate select_for_mutant(const Cells& value_view, const Json& initial_value, Mutant m) {
  if (m != Mutant::reader_tie_lowest) return select_latest(value_view, initial_value);
  Candidate best{-1, initial_value, {}};
  for (const Candidate& c : view_candidates(value_view)) {
    bool beats;
    if (c.early.size() == best.early.size() && c.early != best.early) {
      // The broken rule: equal-size but different early sets resolve to the
      // lower id. (Atomic views are containment-ordered, so equal-size
      // early sets are in fact always equal and this branch cannot alter
      // the honest outcome; it exists to prove exactly that.)
      beats = c.id < best.id;
    } else {
      beats = honest_beats(c, best);
    }
    if (beats) best = c;
  }
  return best;
}

namespace {

sim::ProtocolRun writer_run(sim::ProcContext& ctx, Json value, ProtocolSetup s) {
  co_await snapshot::publish(ctx, kIdArray, s.n_procs, s.impl, OpKind::post,
                             Json(ctx.self().index));
  SnapshotSet early;
  if (s.mutant != Mutant::writer_skips_early) {
    early = (co_await snapshot::take_snapshot(ctx, kIdArray, s.n_procs, s.impl)).members();
  }
  co_await snapshot::publish(ctx, kValueArray, s.n_procs, s.impl, OpKind::write,
                             Json{{"value", std::move(value)}, {"early", early.to_json()}});
  SnapshotSet late = (co_await snapshot::take_snapshot(ctx, kIdArray, s.n_procs, s.impl)).members();
  co_return Json{{"response", "ok"}, {"late", late.to_json()}};
}

sim::ProtocolRun reader_run(sim::ProcContext& ctx, Json initial_value, ProtocolSetup s) {
  co_await snapshot::publish(ctx, kIdArray, s.n_procs, s.impl, OpKind::post,
                             Json(ctx.self().index));
  SnapshotSet late;
  Json value;
  if (s.mutant == Mutant::reader_late_first) {
    late = (co_await snapshot::take_snapshot(ctx, kIdArray, s.n_procs, s.impl)).members();
    auto view = co_await snapshot::take_snapshot(ctx, kValueArray, s.n_procs, s.impl);
    value = select_for_mutant(view.cells, initial_value, s.mutant).value;
  } else {
    auto view = co_await snapshot::take_snapshot(ctx, kValueArray, s.n_procs, s.impl);
    value = select_for_mutant(view.cells, initial_value, s.mutant).value;
    late = (co_await snapshot::take_snapshot(ctx, kIdArray, s.n_procs, s.impl)).members();
  }
  co_return Json{{"response", std::move(value)}, {"late", late.to_json()}};
}

}  // namespace

sim::ProtocolFactory writer_protocol(Json value, ProtocolSetup setup) {
  return [value, setup](sim::ProcContext& ctx) { return writer_run(ctx, value, setup); };
}

sim::ProtocolFactory reader_protocol(Json initial_value, ProtocolSetup setup) {
  return [initial_value, setup](sim::ProcContext& ctx) {
    return reader_run(ctx, initial_value, setup);
  };
}

namespace {

// A collect scan over a one-shot array needs at most n+1 collects of n
// reads each: every extra collect past the first two is forced by a cell
// change, and each of the other n-1 cells changes at most once.
int scan_budget(int n) { return (n + 1) * n; }

}  // namespace

int writer_step_budget(const ProtocolSetup& s) {
  const int scans = s.mutant == Mutant::writer_skips_early ? 3 : 4;
  if (s.impl == snapshot::SnapshotImpl::primitive) return scans;
  return scans * scan_budget(s.n_procs) + 2;
}

int reader_step_budget(const ProtocolSetup& s) {
  if (s.impl == snapshot::SnapshotImpl::primitive) return 3;
  return 3 * scan_budget(s.n_procs) + 1;
}

ExtractedRecords extract_records(const Trace& trace,
                                 const std::map<ProcId, obj::Command>& commands) {
  ExtractedRecords out;
  for (const auto& [proc, cmd] : commands) {
    if (auto output = trace.output_of(proc)) {
      out.completed.push_back(
          {proc, cmd, output->at("response"), SnapshotSet::from_json(output->at("late"))});
      continue;
    }
    bool wrote_value = false;
    for (const TraceEvent& ev : trace.events) {
      if (ev.proc == proc && ev.kind == OpKind::write && ev.array == kValueArray) {
        wrote_value = true;
        break;
      }
    }
    if (wrote_value) out.pending.push_back({proc, cmd});
  }
  return out;
}

}  // namespace oneshot::mwmr
