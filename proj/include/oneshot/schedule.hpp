#ifndef ONESHOT_SCHEDULE_HPP_
#define ONESHOT_SCHEDULE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "oneshot/types.hpp"

namespace oneshot::sim {

/// An explicit interleaving: at position k, the named processor takes its
/// next protocol step. A processor scheduled after its protocol finished is
/// a no-op step; a processor whose steps stop before its protocol finished
/// is a crashed participant.
struct Schedule {
  std::vector<ProcId> steps;

  Json to_json() const;
  static Schedule from_json(const Json& arr);

  auto operator<=>(const Schedule&) const = default;
};

using StepCounts = std::map<ProcId, int>;

/// Number of distinct interleavings of the given per-processor step counts.
/// Saturates at UINT64_MAX on overflow.
std::uint64_t multinomial(const StepCounts& counts);

struct ScheduleCapExceeded : std::runtime_error {
  std::uint64_t interleavings;
  ScheduleCapExceeded(int total_steps, int cap, std::uint64_t interleavings);
};

/// Streams every interleaving of the given step counts exactly once, in
/// lexicographic order of processor indices. Refuses up front when the total
/// step count exceeds the cap.
class ScheduleEnumerator {
 public:
  explicit ScheduleEnumerator(const StepCounts& counts, int max_total_steps = kDefaultStepCap);

  /// Next schedule, or nullopt when exhausted.
  std::optional<Schedule> next();

  std::uint64_t total() const { return total_; }

  static constexpr int kDefaultStepCap = 20;

 private:
  std::vector<ProcId> current_;
  std::uint64_t total_ = 0;
  bool first_ = true;
  bool done_ = false;
};

/// A uniformly random interleaving of the step-count multiset. The same seed
/// always yields the same schedule (the generator and shuffle are pinned, not
/// delegated to implementation-defined library distributions).
Schedule random_schedule(const StepCounts& counts, std::uint64_t seed);

}  // namespace oneshot::sim

#endif  // ONESHOT_SCHEDULE_HPP_
