#include "oneshot/task.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oneshot::task {

namespace {

std::string format_procs(const std::vector<ProcId>& procs) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < procs.size(); ++i) os << (i ? ", " : "") << procs[i];
  os << "]";
  return os.str();
}

// One slot of a candidate linearization under construction.
struct Slot {
  bool is_pending;
  size_t idx;  // into the sorted completed/pending arrays
};

struct Search {
  const obj::ObjectStateMachine& spec;
  std::vector<OpexRecord> completed;  // sorted by descending proc id
  std::vector<PendingRecord> pending; // sorted by descending proc id
  std::vector<bool> completed_used;
  std::vector<bool> pending_used;
  size_t completed_left = 0;
  std::vector<Slot> reversed;
  std::vector<Slot> found;
  bool ok = false;

  // Forward replay of the candidate (stored back to front), filtering on
  // the recorded responses of completed records; pendings only thread state.
  bool replays() const {
    std::vector<Json> states{spec.initial_state()};
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
      const obj::Command& cmd =
          it->is_pending ? pending[it->idx].command : completed[it->idx].command;
      std::vector<Json> next;
      for (const Json& s : states) {
        auto ts = spec.transition(s, cmd);
        if (ts.empty()) {
          throw std::domain_error("transition undefined for state " + s.dump() +
                                  " and command " + cmd.to_json().dump());
        }
        for (obj::Transition& t : ts) {
          if (!it->is_pending && t.response != completed[it->idx].response) continue;
          if (std::find(next.begin(), next.end(), t.state) == next.end()) {
            next.push_back(std::move(t.state));
          }
        }
      }
      if (next.empty()) return false;
      states = std::move(next);
    }
    return true;
  }

  bool place() {
    if (completed_left == 0 && replays()) {
      found = reversed;
      return ok = true;
    }
    // Remaining completed records, highest id first. One may close the
    // sequence only if its late-snapshot covers all other remaining
    // completed processors; that test is exact, so no candidate explored
    // here can fail well-ordering later.
    SnapshotSet remaining;
    for (size_t i = 0; i < completed.size(); ++i) {
      if (!completed_used[i]) remaining.add(completed[i].proc);
    }
    for (size_t i = 0; i < completed.size(); ++i) {
      if (completed_used[i]) continue;
      SnapshotSet others = remaining;
      others.remove(completed[i].proc);
      if (!completed[i].late_snapshot.contains_all(others)) continue;
      completed_used[i] = true;
      --completed_left;
      reversed.push_back({false, i});
      if (place()) return true;
      reversed.pop_back();
      ++completed_left;
      completed_used[i] = false;
    }
    // Then pending insertions, highest id first.
    for (size_t i = 0; i < pending.size(); ++i) {
      if (pending_used[i]) continue;
      pending_used[i] = true;
      reversed.push_back({true, i});
      if (place()) return true;
      reversed.pop_back();
      pending_used[i] = false;
    }
    return false;
  }
};

}  // namespace

Json Verdict::to_json() const {
  Json w = Json::array();
  for (ProcId p : witness) w.push_back(p.index);
  Json a = Json::array();
  for (ProcId p : adopted) a.push_back(p.index);
  return Json{{"valid", valid}, {"witness", w}, {"adopted", a}, {"violation", violation}};
}

Verdict validate_output_tuple(const obj::ObjectStateMachine& spec,
                              const std::vector<OpexRecord>& completed,
                              const std::vector<PendingRecord>& pending, int bound) {
  if (static_cast<int>(completed.size() + pending.size()) > bound) {
    throw std::invalid_argument("output tuple has " +
                                std::to_string(completed.size() + pending.size()) +
                                " records, exceeding the validation bound " +
                                std::to_string(bound));
  }
  for (const PendingRecord& p : pending) {
    for (const OpexRecord& c : completed) {
      if (p.proc == c.proc) {
        throw std::invalid_argument("processor p" + std::to_string(p.proc.index) +
                                    " appears both completed and pending");
      }
    }
  }

  Search search{spec, completed, pending, {}, {}, 0, {}, {}, false};
  auto desc = [](const auto& a, const auto& b) { return b.proc < a.proc; };
  std::sort(search.completed.begin(), search.completed.end(), desc);
  std::sort(search.pending.begin(), search.pending.end(), desc);
  search.completed_used.assign(search.completed.size(), false);
  search.pending_used.assign(search.pending.size(), false);
  search.completed_left = search.completed.size();
  search.place();

  Verdict verdict;
  if (search.ok) {
    verdict.valid = true;
    std::vector<ordering::SnapRecord> placed;
    std::vector<obj::Command> commands;
    std::vector<std::pair<size_t, Json>> expect;  // completed positions
    for (auto it = search.found.rbegin(); it != search.found.rend(); ++it) {
      if (it->is_pending) {
        const PendingRecord& r = search.pending[it->idx];
        verdict.witness.push_back(r.proc);
        verdict.adopted.push_back(r.proc);
        commands.push_back(r.command);
      } else {
        const OpexRecord& r = search.completed[it->idx];
        verdict.witness.push_back(r.proc);
        placed.emplace_back(r.proc, r.late_snapshot);
        expect.emplace_back(commands.size(), r.response);
        commands.push_back(r.command);
      }
    }
    // Independent re-check of the witness before handing it out.
    bool matched = false;
    for (const std::vector<Json>& responses : obj::replay(spec, commands)) {
      matched = std::all_of(expect.begin(), expect.end(), [&](const auto& e) {
        return responses[e.first] == e.second;
      });
      if (matched) break;
    }
    if (!ordering::check_well_ordering(placed) || !matched) {
      throw std::logic_error("witness failed its re-check: " + format_procs(verdict.witness));
    }
    return verdict;
  }

  verdict.valid = false;
  std::vector<ordering::SnapRecord> records;
  for (const OpexRecord& r : completed) records.emplace_back(r.proc, r.late_snapshot);
  auto orders = ordering::well_ordered_permutations(records, bound);
  if (orders.empty()) {
    verdict.violation = "no well-ordered ordering of the completed records exists";
    return verdict;
  }
  // Every order replays wrong; show the first one as an example.
  std::map<ProcId, const OpexRecord*> by_proc;
  for (const OpexRecord& r : completed) by_proc[r.proc] = &r;
  std::vector<obj::Command> commands;
  Json recorded = Json::array();
  for (ProcId p : orders.front()) {
    commands.push_back(by_proc.at(p)->command);
    recorded.push_back(by_proc.at(p)->response);
  }
  Json produced = Json::array();
  auto outcomes = obj::replay(spec, commands);
  for (const Json& r : *outcomes.begin()) produced.push_back(r);
  verdict.violation = "replay mismatch: no well-ordered ordering, with any pending adoption, "
                      "reproduces the recorded responses; e.g. ordering " +
                      format_procs(orders.front()) + " replays to " + produced.dump() +
                      " where recorded responses are " + recorded.dump();
  return verdict;
}

TaskSpec object_task(obj::ObjectStateMachine spec, std::map<ProcId, obj::Command> inputs,
                     int bound) {
  TaskSpec task;
  task.inputs = std::move(inputs);
  task.delta = [spec = std::move(spec), bound](const std::vector<OpexRecord>& completed,
                                               const std::vector<PendingRecord>& pending) {
    return validate_output_tuple(spec, completed, pending, bound);
  };
  return task;
}

bool renaming_task_validator(const std::vector<std::pair<ProcId, int>>& outputs) {
  const int k = static_cast<int>(outputs.size());
  std::set<int> names;
  for (const auto& [proc, name] : outputs) {
    if (name < 1 || name > 2 * k - 1) return false;
    if (!names.insert(name).second) return false;
  }
  return true;
}

bool ordered_renaming_validator(
    const std::vector<std::tuple<ProcId, int, SnapshotSet>>& outputs) {
  std::vector<std::pair<ProcId, int>> names;
  for (const auto& [proc, name, snap] : outputs) names.emplace_back(proc, name);
  if (!renaming_task_validator(names)) return false;
  std::vector<std::tuple<ProcId, int, SnapshotSet>> sorted = outputs;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return std::get<1>(a) < std::get<1>(b); });
  std::vector<ordering::SnapRecord> seq;
  for (const auto& [proc, name, snap] : sorted) seq.emplace_back(proc, snap);
  return ordering::check_well_ordering(seq);
}

bool swap_task_validator(const std::vector<std::pair<ProcId, Json>>& outputs) {
  std::set<int> participants;
  for (const auto& [proc, got] : outputs) participants.insert(proc.index);
  if (participants.size() != outputs.size()) return false;

  std::map<int, Json> got_by_proc;
  std::set<int> returned;
  int null_count = 0;
  for (const auto& [proc, got] : outputs) {
    got_by_proc[proc.index] = got;
    if (got.is_null()) {
      ++null_count;
    } else {
      if (!got.is_number_integer() || !participants.count(got.get<int>())) return false;
      if (!returned.insert(got.get<int>()).second) return false;
    }
  }
  if (null_count != 1) return false;

  // The unique participant returned by nobody heads the path; follow the
  // edges to null and require every participant on the way.
  std::vector<int> heads;
  for (int p : participants) {
    if (!returned.count(p)) heads.push_back(p);
  }
  if (heads.size() != 1) return false;
  std::set<int> seen;
  int cur = heads.front();
  while (true) {
    if (!seen.insert(cur).second) return false;
    const Json& got = got_by_proc.at(cur);
    if (got.is_null()) break;
    cur = got.get<int>();
  }
  return seen.size() == participants.size();
}

}  // namespace oneshot::task
