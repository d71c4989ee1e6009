#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "tricount/algo/triangle_count.hpp"
#include "tricount/graph/local_graph.hpp"
#include "tricount/io/generators.hpp"
#include "tricount/io/normalize.hpp"
#include "tricount/runtime/cluster.hpp"

namespace tricount::testing {

inline auto complete_graph(VertexId n) -> std::vector<Edge> {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return edges;
}

inline auto path_graph(VertexId n) -> std::vector<Edge> {
  std::vector<Edge> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return edges;
}

inline auto star_graph(VertexId leaves) -> std::vector<Edge> {
  std::vector<Edge> edges;
  for (VertexId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return edges;
}

/// Uniform random labeled tree on n vertices (random attachment).
inline auto random_tree(VertexId n, std::uint64_t seed) -> std::vector<Edge> {
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) {
    VertexId const parent = io::uniform_below(rng, v);
    edges.emplace_back(parent, v);
  }
  return edges;
}

inline auto local_graphs(std::vector<Edge> const& edges, graph::Partition const& part)
    -> std::vector<graph::LocalGraph> {
  auto const per_pe = io::distribute(edges, part);
  std::vector<graph::LocalGraph> graphs;
  for (PeId i = 0; i < part.num_pes(); ++i) {
    graphs.push_back(graph::LocalGraph::build(per_pe[i], part, i));
  }
  return graphs;
}

inline auto local_graphs(std::vector<Edge> const& edges, VertexId n, PeId p) -> std::vector<graph::LocalGraph> {
  return local_graphs(edges, graph::Partition::balanced(n, p));
}

inline auto vertex_count(std::vector<Edge> const& edges) -> VertexId {
  VertexId n = 0;
  for (auto const& [u, v] : edges) n = std::max({n, u + 1, v + 1});
  return n;
}

/// Runs one algorithm on a fresh deterministic cluster.
inline auto run_algorithm(std::vector<Edge> const& edges, VertexId n, PeId p, algo::AlgoOptions const& options,
                          runtime::ClusterConfig config = {}) -> algo::TriangleResult {
  config.num_pes = p;
  runtime::Cluster cluster(config);
  auto const graphs = local_graphs(edges, n, p);
  return algo::count_triangles(cluster, graphs, options);
}

inline auto options_for(algo::Algorithm a) -> algo::AlgoOptions {
  algo::AlgoOptions options;
  options.algorithm = a;
  return options;
}

inline constexpr std::array<algo::Algorithm, 4> kAllAlgorithms{algo::Algorithm::ditric, algo::Algorithm::ditric2,
                                                               algo::Algorithm::cetric, algo::Algorithm::cetric2};

using Triple = std::tuple<VertexId, VertexId, VertexId>;

inline auto sorted_triple(VertexId a, VertexId b, VertexId c) -> Triple {
  std::array<VertexId, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return {t[0], t[1], t[2]};
}

}  // namespace tricount::testing
