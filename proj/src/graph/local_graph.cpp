#include "tricount/graph/local_graph.hpp"

#include <algorithm>
#include <string>

namespace tricount::graph {

GhostTable::GhostTable(std::vector<VertexId> ids, std::vector<PeId> owners)
    : ids_(std::move(ids)), owners_(std::move(owners)) {}

auto GhostTable::index_of(VertexId v) const -> std::optional<std::size_t> {
  auto const it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

auto LocalGraph::build(std::span<Edge const> edges, Partition const& part, PeId pe) -> LocalGraph {
  LocalGraph g;
  g.pe_ = pe;
  g.part_ = part;
  g.first_ = part.begin_of(pe);
  std::size_t const n_local = part.size_of(pe);

  auto const local = [&](VertexId v) { return part.is_local(v, pe); };

  std::vector<std::size_t> degree(n_local, 0);
  for (auto const& [u, v] : edges) {
    if (u == v) {
      fail(ErrorKind::parameter, "self-loop on vertex " + std::to_string(u));
    }
    bool const lu = local(u);
    bool const lv = local(v);
    if (!lu && !lv) {
      fail(ErrorKind::foreign_edge, "edge {" + std::to_string(u) + "," + std::to_string(v) +
                                        "} has no endpoint on PE " + std::to_string(pe));
    }
    if (lu) ++degree[u - g.first_];
    if (lv) ++degree[v - g.first_];
  }

  g.offsets_.assign(n_local + 1, 0);
  for (std::size_t i = 0; i < n_local; ++i) {
    g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  }
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  std::vector<VertexId> ghost_ids;
  for (auto const& [u, v] : edges) {
    if (local(u)) {
      g.adjacency_[fill[u - g.first_]++] = v;
    } else {
      ghost_ids.push_back(u);
    }
    if (local(v)) {
      g.adjacency_[fill[v - g.first_]++] = u;
    } else {
      ghost_ids.push_back(v);
    }
  }
  for (std::size_t i = 0; i < n_local; ++i) {
    auto const row_begin = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto const row_end = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(row_begin, row_end);
    if (std::adjacent_find(row_begin, row_end) != row_end) {
      fail(ErrorKind::parameter,
           "duplicate edge at vertex " + std::to_string(g.first_ + i) + "; normalize the input first");
    }
  }

  std::sort(ghost_ids.begin(), ghost_ids.end());
  ghost_ids.erase(std::unique(ghost_ids.begin(), ghost_ids.end()), ghost_ids.end());
  std::vector<PeId> owners;
  owners.reserve(ghost_ids.size());
  for (VertexId const x : ghost_ids) {
    owners.push_back(part.rank_of(x));
  }
  g.ghosts_ = GhostTable(std::move(ghost_ids), std::move(owners));
  return g;
}

auto LocalGraph::neighbors(VertexId v) const -> std::span<VertexId const> {
  if (!is_local(v)) {
    fail(ErrorKind::out_of_range, "vertex " + std::to_string(v) + " is not local to PE " + std::to_string(pe_));
  }
  std::size_t const i = v - first_;
  return std::span<VertexId const>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

}  // namespace tricount::graph
