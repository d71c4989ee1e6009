#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tricount/graph/local_graph.hpp"
#include "tricount/graph/order.hpp"
#include "tricount/graph/partition.hpp"

namespace tricount::graph {

using GhostDegrees = std::unordered_map<VertexId, Degree>;

/// Degrees of every vertex a PE knows about: its local range and its ghosts.
class DegreeDirectory {
 public:
  DegreeDirectory() = default;
  DegreeDirectory(VertexId first, std::vector<Degree> local_degrees, GhostTable ghosts,
                  std::vector<Degree> ghost_degrees);

  [[nodiscard]] auto first() const noexcept -> VertexId { return first_; }
  [[nodiscard]] auto num_local() const noexcept -> std::size_t { return local_.size(); }
  [[nodiscard]] auto is_local(VertexId v) const noexcept -> bool {
    return v >= first_ && v - first_ < local_.size();
  }
  [[nodiscard]] auto ghosts() const noexcept -> GhostTable const& { return ghosts_; }

  [[nodiscard]] auto degree_of(VertexId v) const -> std::optional<Degree>;
  [[nodiscard]] auto key_of(VertexId v) const -> std::optional<DegreeOrderKey>;

 private:
  VertexId first_ = 0;
  std::vector<Degree> local_;
  GhostTable ghosts_;
  std::vector<Degree> ghost_degrees_;
};

/// Degree-oriented adjacency of one PE. Rows [0, num_local()) are the local
/// vertices in id order; in expanded mode rows num_local() + i hold the
/// locally visible out-edges of ghost i. Each row lists A(v) sorted by
/// DegreeOrderKey, every entry ranked above v.
class OrientedGraph {
 public:
  enum class Mode { plain, expanded, contracted };

  OrientedGraph() = default;

  [[nodiscard]] auto mode() const noexcept -> Mode { return mode_; }
  [[nodiscard]] auto pe() const noexcept -> PeId { return pe_; }
  [[nodiscard]] auto partition() const noexcept -> Partition const& { return part_; }
  [[nodiscard]] auto directory() const noexcept -> DegreeDirectory const& { return dir_; }

  [[nodiscard]] auto num_local() const noexcept -> std::size_t { return dir_.num_local(); }
  [[nodiscard]] auto num_rows() const noexcept -> std::size_t { return offsets_.size() - 1; }
  [[nodiscard]] auto is_local(VertexId v) const noexcept -> bool { return dir_.is_local(v); }

  [[nodiscard]] auto row_vertex(std::size_t row) const -> VertexId;
  [[nodiscard]] auto row_of(VertexId v) const -> std::optional<std::size_t>;

  [[nodiscard]] auto out(std::size_t row) const -> std::span<DegreeOrderKey const> {
    return std::span<DegreeOrderKey const>(targets_).subspan(offsets_[row], offsets_[row + 1] - offsets_[row]);
  }
  /// A(v), or an empty list when this PE stores no row for v.
  [[nodiscard]] auto out_of(VertexId v) const -> std::span<DegreeOrderKey const>;

  /// Ghost in-neighbors of a local row (plain mode only; empty otherwise).
  [[nodiscard]] auto incoming_cut(std::size_t row) const -> std::span<DegreeOrderKey const>;

  /// Sum of |A(v)| over all stored rows.
  [[nodiscard]] auto num_out_edges() const noexcept -> std::size_t { return targets_.size(); }
  /// Sum of |A(v)| over local rows only.
  [[nodiscard]] auto num_local_out_edges() const noexcept -> std::size_t { return offsets_[num_local()]; }

  friend auto orient_and_sort(LocalGraph const& g, GhostDegrees const& ghost_degrees) -> OrientedGraph;
  friend auto expand_ghost_adjacency(OrientedGraph const& g) -> OrientedGraph;
  friend auto contract_to_cut(OrientedGraph const& g) -> OrientedGraph;
  friend auto orient_whole_graph(std::span<Edge const> edges, VertexId n) -> OrientedGraph;

 private:
  Mode mode_ = Mode::plain;
  PeId pe_ = 0;
  Partition part_;
  DegreeDirectory dir_;
  std::vector<std::size_t> offsets_{0};
  std::vector<DegreeOrderKey> targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<DegreeOrderKey> in_targets_;
};

/// Orients the local graph: A(v) = {x in N_v | x > v} for local v. Edges from
/// lower-ranked ghosts are kept as incoming cut edges for later expansion.
/// Throws missing_degree if a ghost degree is absent.
auto orient_and_sort(LocalGraph const& g, GhostDegrees const& ghost_degrees) -> OrientedGraph;

/// Re-homes incoming cut edges onto ghost rows: A(x) = {v in N_x ∩ V_i | v > x}.
/// Requires plain mode.
auto expand_ghost_adjacency(OrientedGraph const& g) -> OrientedGraph;

/// Keeps only oriented cut edges of local rows: A(v) = {x in N_v | x > v} \ V_i.
auto contract_to_cut(OrientedGraph const& g) -> OrientedGraph;

/// Convenience: the oriented graph of a whole (normalized) graph on a single PE.
auto orient_whole_graph(std::span<Edge const> edges, VertexId n) -> OrientedGraph;

}  // namespace tricount::graph
