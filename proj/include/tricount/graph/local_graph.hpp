#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tricount/graph/partition.hpp"
#include "tricount/types.hpp"

namespace tricount::graph {

/// Ghost vertices of one PE, sorted by id, with their owners.
class GhostTable {
 public:
  GhostTable() = default;
  GhostTable(std::vector<VertexId> ids, std::vector<PeId> owners);

  [[nodiscard]] auto size() const noexcept -> std::size_t { return ids_.size(); }
  [[nodiscard]] auto empty() const noexcept -> bool { return ids_.empty(); }
  [[nodiscard]] auto ids() const noexcept -> std::span<VertexId const> { return ids_; }
  [[nodiscard]] auto owners() const noexcept -> std::span<PeId const> { return owners_; }

  /// Position of `v` in the table.
  [[nodiscard]] auto index_of(VertexId v) const -> std::optional<std::size_t>;
  [[nodiscard]] auto contains(VertexId v) const -> bool { return index_of(v).has_value(); }
  [[nodiscard]] auto owner(std::size_t index) const -> PeId { return owners_[index]; }

 private:
  std::vector<VertexId> ids_;
  std::vector<PeId> owners_;
};

/// One PE's view of the input graph: full neighborhoods of its vertex range in
/// adjacency array form, plus the set of ghost vertices those neighborhoods
/// reach. Ghost degrees are not known here; see exchange_ghost_degrees.
class LocalGraph {
 public:
  LocalGraph() = default;

  /// Builds the view for `pe`. Every edge needs at least one endpoint owned by
  /// `pe`; edges must be simple (deduplicated, no self-loops).
  static auto build(std::span<Edge const> edges, Partition const& part, PeId pe) -> LocalGraph;

  [[nodiscard]] auto pe() const noexcept -> PeId { return pe_; }
  [[nodiscard]] auto partition() const noexcept -> Partition const& { return part_; }
  [[nodiscard]] auto first() const noexcept -> VertexId { return first_; }
  [[nodiscard]] auto last() const noexcept -> VertexId { return first_ + num_local(); }
  [[nodiscard]] auto num_local() const noexcept -> std::size_t { return offsets_.size() - 1; }
  [[nodiscard]] auto is_local(VertexId v) const noexcept -> bool { return v >= first_ && v < last(); }

  [[nodiscard]] auto offsets() const noexcept -> std::span<std::size_t const> { return offsets_; }
  [[nodiscard]] auto adjacency() const noexcept -> std::span<VertexId const> { return adjacency_; }

  /// Sorted neighborhood of local vertex v.
  [[nodiscard]] auto neighbors(VertexId v) const -> std::span<VertexId const>;
  [[nodiscard]] auto local_degree(VertexId v) const -> Degree { return neighbors(v).size(); }

  /// Number of stored adjacency entries, i.e. |E_i| in words.
  [[nodiscard]] auto num_adjacency_entries() const noexcept -> std::size_t { return adjacency_.size(); }

  [[nodiscard]] auto ghosts() const noexcept -> GhostTable const& { return ghosts_; }

 private:
  PeId pe_ = 0;
  Partition part_;
  VertexId first_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  GhostTable ghosts_;
};

}  // namespace tricount::graph
