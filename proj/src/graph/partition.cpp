#include "tricount/graph/partition.hpp"

#include <algorithm>
#include <string>

namespace tricount::graph {

Partition::Partition(std::vector<VertexId> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2 || boundaries_.front() != 0) {
    fail(ErrorKind::parameter, "partition boundaries must start at 0 and cover at least one PE");
  }
  if (!std::is_sorted(boundaries_.begin(), boundaries_.end())) {
    fail(ErrorKind::parameter, "partition boundaries must be non-decreasing");
  }
}

auto Partition::balanced(VertexId n, PeId p) -> Partition {
  if (p == 0) {
    fail(ErrorKind::parameter, "number of PEs must be at least 1");
  }
  if (p > n) {
    fail(ErrorKind::parameter,
         "more PEs (" + std::to_string(p) + ") than vertices (" + std::to_string(n) + ")");
  }
  VertexId const base = n / p;
  VertexId const extra = n % p;
  std::vector<VertexId> boundaries(p + 1, 0);
  for (PeId i = 0; i < p; ++i) {
    boundaries[i + 1] = boundaries[i] + base + (i < extra ? 1 : 0);
  }
  return Partition(std::move(boundaries));
}

auto Partition::rank_of(VertexId v) const -> PeId {
  if (v >= num_vertices()) {
    fail(ErrorKind::out_of_range,
         "vertex " + std::to_string(v) + " outside [0, " + std::to_string(num_vertices()) + ")");
  }
  // Last boundary <= v; empty ranges are skipped by upper_bound.
  auto const it = std::upper_bound(boundaries_.begin(), boundaries_.end(), v);
  return static_cast<PeId>(std::distance(boundaries_.begin(), it) - 1);
}

}  // namespace tricount::graph
