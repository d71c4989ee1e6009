#pragma once

#include <span>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::graph {

/// 1D partition of [0, n) into p contiguous ranges; PE i owns
/// [boundaries[i], boundaries[i+1]).
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<VertexId> boundaries);

  /// First n mod p PEs receive ceil(n/p) vertices, the rest floor(n/p).
  static auto balanced(VertexId n, PeId p) -> Partition;

  [[nodiscard]] auto num_pes() const noexcept -> PeId {
    return static_cast<PeId>(boundaries_.size() - 1);
  }
  [[nodiscard]] auto num_vertices() const noexcept -> VertexId { return boundaries_.back(); }
  [[nodiscard]] auto boundaries() const noexcept -> std::span<VertexId const> { return boundaries_; }

  [[nodiscard]] auto begin_of(PeId pe) const -> VertexId { return boundaries_.at(pe); }
  [[nodiscard]] auto end_of(PeId pe) const -> VertexId { return boundaries_.at(pe + 1); }
  [[nodiscard]] auto size_of(PeId pe) const -> VertexId { return end_of(pe) - begin_of(pe); }

  /// Owner of v; throws out_of_range for v >= n.
  [[nodiscard]] auto rank_of(VertexId v) const -> PeId;

  [[nodiscard]] auto is_local(VertexId v, PeId pe) const -> bool {
    return v >= begin_of(pe) && v < end_of(pe);
  }

  friend auto operator==(Partition const&, Partition const&) -> bool = default;

 private:
  std::vector<VertexId> boundaries_{0};
};

inline auto rank_of(VertexId v, Partition const& part) -> PeId { return part.rank_of(v); }

}  // namespace tricount::graph
