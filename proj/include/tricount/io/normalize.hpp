#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tricount/graph/partition.hpp"
#include "tricount/types.hpp"

namespace tricount::io {

/// Orients every pair as (min, max), drops self-loops and duplicates, sorts.
/// Ids are kept.
auto simplify(std::vector<Edge> edges) -> std::vector<Edge>;

struct NormalizedGraph {
  std::vector<Edge> edges;
  VertexId n = 0;
  /// original_id[new id] = id in the input; ascending, so the map preserves order.
  std::vector<VertexId> original_id;
};

/// simplify() followed by removal of isolated vertices: the remaining ids are
/// renumbered densely in their original order.
auto normalize(std::vector<Edge> edges) -> NormalizedGraph;

/// Writes "new old" lines for the id map.
void write_remap(std::ostream& out, NormalizedGraph const& g);

/// One "u v" pair per line; '#' starts a comment line; blank lines skipped.
auto read_edge_list(std::istream& in) -> std::vector<Edge>;
auto read_edge_list(std::string const& path) -> std::vector<Edge>;
void write_edge_list(std::ostream& out, std::span<Edge const> edges);

/// Balanced contiguous ranges; throws parameter if p == 0 or p > n.
auto partition_contiguous(VertexId n, PeId p) -> graph::Partition;

/// Edges per PE: every edge goes to the owners of both endpoints.
auto distribute(std::span<Edge const> edges, graph::Partition const& part) -> std::vector<std::vector<Edge>>;

}  // namespace tricount::io
