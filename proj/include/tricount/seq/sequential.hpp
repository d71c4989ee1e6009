#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tricount/graph/oriented_graph.hpp"
#include "tricount/graph/partition.hpp"

namespace tricount::seq {

/// Oracles refuse graphs with more vertices than this.
inline constexpr VertexId kBruteForceLimit = 2048;

struct TriangleClassCount {
  std::uint64_t t1 = 0;  ///< all three vertices on one PE
  std::uint64_t t2 = 0;  ///< two PEs
  std::uint64_t t3 = 0;  ///< three distinct PEs

  [[nodiscard]] auto total() const noexcept -> std::uint64_t { return t1 + t2 + t3; }
  friend auto operator==(TriangleClassCount const&, TriangleClassCount const&) -> bool = default;
};

/// Δ(v) indexed by vertex id.
using PerVertexDelta = std::vector<std::uint64_t>;

using TriangleCallback = std::function<void(VertexId, VertexId, VertexId)>;

/// Compact-forward edge iterator over a single-PE oriented graph. Each
/// triangle is reported once as (v, u, w) with v < u < w in the degree order.
auto edge_iterator(graph::OrientedGraph const& g, TriangleCallback const& on_triangle = {}) -> std::uint64_t;

/// Exhaustive enumeration over the adjacency matrix of vertices [0, max id],
/// independent of any orientation. Throws size error beyond kBruteForceLimit.
auto brute_force(std::span<Edge const> edges) -> std::uint64_t;
void for_each_triangle_brute(std::span<Edge const> edges, TriangleCallback const& on_triangle);

auto classify_triangles(std::span<Edge const> edges, graph::Partition const& part) -> TriangleClassCount;

auto per_vertex_deltas(std::span<Edge const> edges) -> PerVertexDelta;

/// Δ / (d (d - 1)); 0 for d <= 1.
auto lcc(std::uint64_t delta, Degree degree) -> double;

/// Σ_v C(|A(v)|, 2) over the stored rows.
auto count_wedges(graph::OrientedGraph const& g) -> std::uint64_t;

}  // namespace tricount::seq
