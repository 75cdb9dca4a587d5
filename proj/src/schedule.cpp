#include "oneshot/schedule.hpp"

#include <algorithm>
#include <random>

namespace oneshot::sim {

Json Schedule::to_json() const {
  Json arr = Json::array();
  for (ProcId p : steps) arr.push_back(p.index);
  return arr;
}

Schedule Schedule::from_json(const Json& arr) {
  Schedule s;
  for (const auto& v : arr) s.steps.push_back(ProcId{v.get<int>()});
  return s;
}

std::uint64_t multinomial(const StepCounts& counts) {
  // Incremental product of binomials: C(n1,k1)*C(n1+n2,k2)*...
  std::uint64_t result = 1;
  int placed = 0;
  for (const auto& [proc, count] : counts) {
    (void)proc;
    for (int i = 1; i <= count; ++i) {
      ++placed;
      // result = result * placed / i, exact at every step.
      std::uint64_t next;
      if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(placed), &next))
        return UINT64_MAX;
      result = next / static_cast<std::uint64_t>(i);
    }
  }
  return result;
}

ScheduleCapExceeded::ScheduleCapExceeded(int total_steps, int cap, std::uint64_t count)
    : std::runtime_error("schedule enumeration refused: " + std::to_string(total_steps) +
                         " total steps exceeds cap " + std::to_string(cap) + " (" +
                         std::to_string(count) + " interleavings)"),
      interleavings(count) {}

ScheduleEnumerator::ScheduleEnumerator(const StepCounts& counts, int max_total_steps) {
  int total_steps = 0;
  for (const auto& [proc, count] : counts) {
    if (count < 0) throw std::invalid_argument("negative step count");
    for (int i = 0; i < count; ++i) current_.push_back(proc);
    total_steps += count;
  }
  total_ = multinomial(counts);
  if (total_steps > max_total_steps)
    throw ScheduleCapExceeded(total_steps, max_total_steps, total_);
  // current_ starts sorted ascending: the lexicographically first interleaving.
}

std::optional<Schedule> ScheduleEnumerator::next() {
  if (done_) return std::nullopt;
  if (first_) {
    first_ = false;
    return Schedule{current_};
  }
  if (!std::next_permutation(current_.begin(), current_.end())) {
    done_ = true;
    return std::nullopt;
  }
  return Schedule{current_};
}

Schedule random_schedule(const StepCounts& counts, std::uint64_t seed) {
  Schedule s;
  for (const auto& [proc, count] : counts)
    for (int i = 0; i < count; ++i) s.steps.push_back(proc);
  // Fisher-Yates with an explicit draw so results are stable across library
  // implementations. Modulo bias is immaterial at these lengths.
  std::mt19937_64 rng(seed);
  for (std::size_t i = s.steps.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(s.steps[i - 1], s.steps[j]);
  }
  return s;
}

}  // namespace oneshot::sim
