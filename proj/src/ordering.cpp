#include "oneshot/ordering.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace oneshot::ordering {

HappenedBefore happened_before(const Trace& trace) {
  HappenedBefore hb;
  for (const auto& [pi, a] : trace.intervals) {
    if (!a.end) continue;
    for (const auto& [pj, b] : trace.intervals) {
      if (pi != pj && *a.end < b.start) hb.pairs.insert({pi, pj});
    }
  }
  return hb;
}

bool check_well_ordering(const std::vector<SnapRecord>& seq) {
  const size_t n = seq.size();
  if (n <= 1) return true;
  std::vector<SnapshotSet> suffix(n);
  suffix[n - 1] = seq[n - 1].second;
  for (size_t j = n - 1; j-- > 0;) {
    suffix[j] = seq[j].second.intersect(suffix[j + 1]);
  }
  SnapshotSet earlier;
  for (size_t k = 0; k < n; ++k) {
    if (!suffix[k].contains_all(earlier)) return false;
    earlier.add(seq[k].first);
  }
  return true;
}

namespace {

void place_backward(std::vector<SnapRecord>& remaining, std::vector<ProcId>& reversed,
                    std::vector<std::vector<ProcId>>& out) {
  if (remaining.empty()) {
    out.emplace_back(reversed.rbegin(), reversed.rend());
    return;
  }
  // remaining is kept sorted by descending ProcId, so eligible records are
  // tried highest id first.
  SnapshotSet everyone;
  for (const auto& [proc, snap] : remaining) everyone.add(proc);
  for (size_t i = 0; i < remaining.size(); ++i) {
    SnapshotSet others = everyone;
    others.remove(remaining[i].first);
    if (!remaining[i].second.contains_all(others)) continue;
    SnapRecord picked = remaining[i];
    remaining.erase(remaining.begin() + static_cast<long>(i));
    reversed.push_back(picked.first);
    place_backward(remaining, reversed, out);
    reversed.pop_back();
    remaining.insert(remaining.begin() + static_cast<long>(i), picked);
  }
}

}  // namespace

std::vector<std::vector<ProcId>> well_ordered_permutations(const std::vector<SnapRecord>& records,
                                                           int bound) {
  if (static_cast<int>(records.size()) > bound) {
    throw std::invalid_argument("record count " + std::to_string(records.size()) +
                                " exceeds permutation bound " + std::to_string(bound));
  }
  std::vector<SnapRecord> remaining = records;
  std::sort(remaining.begin(), remaining.end(),
            [](const SnapRecord& a, const SnapRecord& b) { return b.first < a.first; });
  std::vector<ProcId> reversed;
  std::vector<std::vector<ProcId>> out;
  place_backward(remaining, reversed, out);
  return out;
}

bool consistent_with(const std::vector<ProcId>& seq, const HappenedBefore& hb) {
  for (size_t i = 0; i < seq.size(); ++i) {
    for (size_t j = i + 1; j < seq.size(); ++j) {
      if (hb.precedes(seq[j], seq[i])) return false;
    }
  }
  return true;
}

}  // namespace oneshot::ordering
