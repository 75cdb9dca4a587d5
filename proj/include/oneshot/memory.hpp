#ifndef ONESHOT_MEMORY_HPP_
#define ONESHOT_MEMORY_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oneshot/types.hpp"

namespace oneshot::sim {

using Cells = std::vector<std::optional<Json>>;

struct SingleWriterViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct UnknownArray : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// SWMR register arrays: cell (name, i) may be written only by processor i.
/// Cells start empty; an empty cell reads as JSON null. Every mutation goes
/// through write_cell so the single-writer discipline is checked on each
/// simulated write, not assumed.
class SharedMemory {
 public:
  SharedMemory() = default;

  static SharedMemory with_arrays(const std::vector<std::pair<std::string, int>>& arrays) {
    SharedMemory m;
    for (const auto& [name, size] : arrays) m.define_array(name, size);
    return m;
  }

  void define_array(const std::string& name, int size) {
    arrays_[name] = Cells(static_cast<std::size_t>(size));
  }

  bool has_array(const std::string& name) const { return arrays_.count(name) > 0; }

  const Cells& array(const std::string& name) const {
    auto it = arrays_.find(name);
    if (it == arrays_.end()) throw UnknownArray("unknown shared array: " + name);
    return it->second;
  }

  void write_cell(const std::string& name, ProcId writer, int index, Json value, int step) {
    auto it = arrays_.find(name);
    if (it == arrays_.end()) throw UnknownArray("unknown shared array: " + name);
    if (index != writer.index)
      throw SingleWriterViolation("single-writer violation at step " + std::to_string(step) +
                                  ": p" + std::to_string(writer.index) + " wrote " + name + "[" +
                                  std::to_string(index) + "]");
    if (index < 0 || static_cast<std::size_t>(index) >= it->second.size())
      throw std::out_of_range("cell index out of range for array " + name);
    it->second[static_cast<std::size_t>(index)] = std::move(value);
  }

  std::optional<Json> read_cell(const std::string& name, int index) const {
    const Cells& cells = array(name);
    if (index < 0 || static_cast<std::size_t>(index) >= cells.size())
      throw std::out_of_range("cell index out of range for array " + name);
    return cells[static_cast<std::size_t>(index)];
  }

  const std::map<std::string, Cells>& arrays() const { return arrays_; }

 private:
  std::map<std::string, Cells> arrays_;
};

/// One consistent copy of a shared array. For the one-step primitive the
/// begin and end step coincide; a collect-based scan spans [begin, end] and
/// is linearizable at some step inside that interval.
struct SnapshotView {
  std::string array;
  Cells cells;
  int begin_step = -1;
  int end_step = -1;

  /// Processor ids of the non-empty cells. Meaningful for id arrays, where
  /// cell i non-empty means processor i has posted.
  SnapshotSet members() const {
    SnapshotSet s;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].has_value()) s.add(ProcId{static_cast<int>(i)});
    return s;
  }
};

inline Json cells_to_json(const Cells& cells) {
  Json arr = Json::array();
  for (const auto& c : cells) arr.push_back(c.has_value() ? *c : Json(nullptr));
  return arr;
}

inline Cells cells_from_json(const Json& arr) {
  Cells cells;
  for (const auto& v : arr)
    cells.push_back(v.is_null() ? std::nullopt : std::optional<Json>(v));
  return cells;
}

}  // namespace oneshot::sim

#endif  // ONESHOT_MEMORY_HPP_
