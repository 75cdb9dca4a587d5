#include "oneshot/trace.hpp"

#include <sstream>

namespace oneshot::sim {

const char* to_string(OpKind kind) {
  switch (kind) {
    case OpKind::post: return "post";
    case OpKind::write: return "write";
    case OpKind::read: return "read";
    case OpKind::snapshot: return "snapshot";
    case OpKind::output: return "output";
  }
  return "?";
}

std::string Trace::dump() const {
  std::ostringstream os;
  for (const TraceEvent& e : events) {
    os << "step=" << e.step << " proc=" << e.proc.index << " op=" << to_string(e.kind)
       << " array=" << (e.array.empty() ? "-" : e.array) << " val=" << e.value.dump() << "\n";
  }
  return os.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string Trace::digest() const { return fnv1a_hex(dump()); }

std::optional<Json> Trace::output_of(ProcId p) const {
  for (const TraceEvent& e : events)
    if (e.proc == p && e.kind == OpKind::output) return e.value;
  return std::nullopt;
}

}  // namespace oneshot::sim
