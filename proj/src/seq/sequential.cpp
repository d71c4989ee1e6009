#include "tricount/seq/sequential.hpp"

#include <algorithm>
#include <string>

#include "tricount/seq/intersect.hpp"

namespace tricount::seq {

using graph::DegreeOrderKey;

auto edge_iterator(graph::OrientedGraph const& g, TriangleCallback const& on_triangle) -> std::uint64_t {
  std::uint64_t triangles = 0;
  for (std::size_t row = 0; row < g.num_rows(); ++row) {
    VertexId const v = g.row_vertex(row);
    auto const out_v = g.out(row);
    for (auto const& u : out_v) {
      auto const out_u = g.out_of(u.id);
      if (on_triangle) {
        triangles += intersect_for_each(out_v, out_u, [&](DegreeOrderKey const& w) { on_triangle(v, u.id, w.id); });
      } else {
        triangles += intersect_count(out_v, out_u);
      }
    }
  }
  return triangles;
}

namespace {

class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(std::span<Edge const> edges) {
    for (auto const& [u, v] : edges) {
      n_ = std::max({n_, u + 1, v + 1});
    }
    if (n_ > kBruteForceLimit) {
      fail(ErrorKind::size, "brute-force oracle limited to " + std::to_string(kBruteForceLimit) +
                                " vertices, got " + std::to_string(n_));
    }
    words_ = (n_ + 63) / 64;
    bits_.assign(n_ * words_, 0);
    for (auto const& [u, v] : edges) {
      if (u != v) {
        set(u, v);
        set(v, u);
      }
    }
  }

  [[nodiscard]] auto n() const -> VertexId { return n_; }
  [[nodiscard]] auto has(VertexId u, VertexId v) const -> bool {
    return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
  }

 private:
  void set(VertexId u, VertexId v) { bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64); }

  VertexId n_ = 0;
  VertexId words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

void for_each_triangle_brute(std::span<Edge const> edges, TriangleCallback const& on_triangle) {
  AdjacencyMatrix const adj(edges);
  VertexId const n = adj.n();
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (!adj.has(u, v)) continue;
      for (VertexId w = v + 1; w < n; ++w) {
        if (adj.has(u, w) && adj.has(v, w)) {
          on_triangle(u, v, w);
        }
      }
    }
  }
}

auto brute_force(std::span<Edge const> edges) -> std::uint64_t {
  std::uint64_t count = 0;
  for_each_triangle_brute(edges, [&](VertexId, VertexId, VertexId) { ++count; });
  return count;
}

auto classify_triangles(std::span<Edge const> edges, graph::Partition const& part) -> TriangleClassCount {
  TriangleClassCount counts;
  for_each_triangle_brute(edges, [&](VertexId u, VertexId v, VertexId w) {
    PeId const a = part.rank_of(u);
    PeId const b = part.rank_of(v);
    PeId const c = part.rank_of(w);
    int const distinct = 1 + (b != a ? 1 : 0) + (c != a && c != b ? 1 : 0);
    switch (distinct) {
      case 1: ++counts.t1; break;
      case 2: ++counts.t2; break;
      default: ++counts.t3; break;
    }
  });
  return counts;
}

auto per_vertex_deltas(std::span<Edge const> edges) -> PerVertexDelta {
  VertexId n = 0;
  for (auto const& [u, v] : edges) {
    n = std::max({n, u + 1, v + 1});
  }
  PerVertexDelta delta(n, 0);
  for_each_triangle_brute(edges, [&](VertexId u, VertexId v, VertexId w) {
    ++delta[u];
    ++delta[v];
    ++delta[w];
  });
  return delta;
}

auto lcc(std::uint64_t delta, Degree degree) -> double {
  if (degree <= 1) {
    return 0.0;
  }
  return static_cast<double>(delta) / (static_cast<double>(degree) * static_cast<double>(degree - 1));
}

auto count_wedges(graph::OrientedGraph const& g) -> std::uint64_t {
  std::uint64_t wedges = 0;
  for (std::size_t row = 0; row < g.num_rows(); ++row) {
    std::uint64_t const d = g.out(row).size();
    if (d >= 2) {
      wedges += d * (d - 1) / 2;
    }
  }
  return wedges;
}

}  // namespace tricount::seq
