#ifndef ONESHOT_TYPES_HPP_
#define ONESHOT_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <vector>

#include <json.hpp>

namespace oneshot {

using Json = nlohmann::json;

/// Identity of a simulated processor. Indices are dense: a configuration of
/// n+1 processors uses exactly the ids 0..n.
struct ProcId {
  int index = -1;

  auto operator<=>(const ProcId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, ProcId p) {
  return os << "p" << p.index;
}

/// A set of processor identities, e.g. the contents of an id snapshot.
/// Backed by a bitmask; configurations are bounded at 32 processors.
class SnapshotSet {
 public:
  static constexpr int kMaxProcs = 32;

  SnapshotSet() = default;
  SnapshotSet(std::initializer_list<int> ids) {
    for (int i : ids) add(ProcId{i});
  }

  void add(ProcId p) { bits_ |= bit(p); }
  void remove(ProcId p) { bits_ &= ~bit(p); }
  bool contains(ProcId p) const { return (bits_ & bit(p)) != 0; }
  bool contains_all(const SnapshotSet& other) const {
    return (other.bits_ & ~bits_) == 0;
  }
  SnapshotSet intersect(const SnapshotSet& other) const {
    return SnapshotSet(bits_ & other.bits_);
  }
  SnapshotSet unite(const SnapshotSet& other) const {
    return SnapshotSet(bits_ | other.bits_);
  }
  int size() const { return __builtin_popcount(bits_); }
  bool empty() const { return bits_ == 0; }

  std::vector<ProcId> ids() const {
    std::vector<ProcId> out;
    for (int i = 0; i < kMaxProcs; ++i)
      if (bits_ & (1u << i)) out.push_back(ProcId{i});
    return out;
  }

  Json to_json() const {
    Json arr = Json::array();
    for (ProcId p : ids()) arr.push_back(p.index);
    return arr;
  }
  static SnapshotSet from_json(const Json& arr) {
    SnapshotSet s;
    for (const auto& v : arr) s.add(ProcId{v.get<int>()});
    return s;
  }

  auto operator<=>(const SnapshotSet&) const = default;

 private:
  explicit SnapshotSet(std::uint32_t bits) : bits_(bits) {}
  static std::uint32_t bit(ProcId p) { return 1u << p.index; }

  std::uint32_t bits_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const SnapshotSet& s) {
  os << "{";
  bool first = true;
  for (ProcId p : s.ids()) {
    if (!first) os << ",";
    os << p;
    first = false;
  }
  return os << "}";
}

}  // namespace oneshot

template <>
struct std::hash<oneshot::ProcId> {
  std::size_t operator()(oneshot::ProcId p) const noexcept {
    return std::hash<int>{}(p.index);
  }
};

#endif  // ONESHOT_TYPES_HPP_
