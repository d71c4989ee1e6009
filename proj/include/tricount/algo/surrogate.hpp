#pragma once

#include <unordered_map>

#include "tricount/types.hpp"

namespace tricount::algo {

/// Remembers the last PE each local neighborhood went to. Callers visit the
/// destinations of one vertex in ascending order, which makes "differs from
/// the last one" equivalent to "not sent yet".
class SurrogateState {
 public:
  /// True iff dst differs from the last recorded destination of v; records dst.
  auto should_send(VertexId v, PeId dst) -> bool {
    auto [it, inserted] = last_sent_.try_emplace(v, dst);
    if (inserted) return true;
    if (it->second == dst) return false;
    it->second = dst;
    return true;
  }

  void clear() { last_sent_.clear(); }

 private:
  std::unordered_map<VertexId, PeId> last_sent_;
};

}  // namespace tricount::algo
