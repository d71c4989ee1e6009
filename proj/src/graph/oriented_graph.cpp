#include "tricount/graph/oriented_graph.hpp"

#include <algorithm>
#include <string>

namespace tricount::graph {

DegreeDirectory::DegreeDirectory(VertexId first, std::vector<Degree> local_degrees, GhostTable ghosts,
                                 std::vector<Degree> ghost_degrees)
    : first_(first),
      local_(std::move(local_degrees)),
      ghosts_(std::move(ghosts)),
      ghost_degrees_(std::move(ghost_degrees)) {}

auto DegreeDirectory::degree_of(VertexId v) const -> std::optional<Degree> {
  if (is_local(v)) {
    return local_[v - first_];
  }
  if (auto const idx = ghosts_.index_of(v)) {
    return ghost_degrees_[*idx];
  }
  return std::nullopt;
}

auto DegreeDirectory::key_of(VertexId v) const -> std::optional<DegreeOrderKey> {
  if (auto const d = degree_of(v)) {
    return DegreeOrderKey{*d, v};
  }
  return std::nullopt;
}

auto OrientedGraph::row_vertex(std::size_t row) const -> VertexId {
  if (row < num_local()) {
    return dir_.first() + row;
  }
  return dir_.ghosts().ids()[row - num_local()];
}

auto OrientedGraph::row_of(VertexId v) const -> std::optional<std::size_t> {
  if (is_local(v)) {
    return v - dir_.first();
  }
  if (mode_ != Mode::expanded) {
    return std::nullopt;
  }
  if (auto const idx = dir_.ghosts().index_of(v)) {
    return num_local() + *idx;
  }
  return std::nullopt;
}

auto OrientedGraph::out_of(VertexId v) const -> std::span<DegreeOrderKey const> {
  if (auto const row = row_of(v)) {
    return out(*row);
  }
  return {};
}

auto OrientedGraph::incoming_cut(std::size_t row) const -> std::span<DegreeOrderKey const> {
  if (mode_ != Mode::plain || row >= num_local()) {
    return {};
  }
  return std::span<DegreeOrderKey const>(in_targets_).subspan(in_offsets_[row], in_offsets_[row + 1] - in_offsets_[row]);
}

auto orient_and_sort(LocalGraph const& g, GhostDegrees const& ghost_degrees) -> OrientedGraph {
  GhostTable const& ghosts = g.ghosts();
  std::vector<Degree> ghost_deg(ghosts.size());
  for (std::size_t i = 0; i < ghosts.size(); ++i) {
    auto const it = ghost_degrees.find(ghosts.ids()[i]);
    if (it == ghost_degrees.end()) {
      fail(ErrorKind::missing_degree, "no degree for ghost vertex " + std::to_string(ghosts.ids()[i]) +
                                          " on PE " + std::to_string(g.pe()));
    }
    ghost_deg[i] = it->second;
  }
  std::vector<Degree> local_deg(g.num_local());
  for (std::size_t i = 0; i < g.num_local(); ++i) {
    local_deg[i] = g.offsets()[i + 1] - g.offsets()[i];
  }

  OrientedGraph out;
  out.mode_ = OrientedGraph::Mode::plain;
  out.pe_ = g.pe();
  out.part_ = g.partition();
  out.dir_ = DegreeDirectory(g.first(), std::move(local_deg), ghosts, std::move(ghost_deg));

  std::size_t const n = g.num_local();
  out.offsets_.assign(1, 0);
  out.in_offsets_.assign(1, 0);
  out.offsets_.reserve(n + 1);
  out.in_offsets_.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    VertexId const v = g.first() + i;
    DegreeOrderKey const kv = *out.dir_.key_of(v);
    auto const out_begin = out.targets_.size();
    auto const in_begin = out.in_targets_.size();
    for (VertexId const x : g.neighbors(v)) {
      DegreeOrderKey const kx = *out.dir_.key_of(x);
      if (kv < kx) {
        out.targets_.push_back(kx);
      } else if (!g.is_local(x)) {
        out.in_targets_.push_back(kx);
      }
    }
    std::sort(out.targets_.begin() + static_cast<std::ptrdiff_t>(out_begin), out.targets_.end());
    std::sort(out.in_targets_.begin() + static_cast<std::ptrdiff_t>(in_begin), out.in_targets_.end());
    out.offsets_.push_back(out.targets_.size());
    out.in_offsets_.push_back(out.in_targets_.size());
  }
  return out;
}

auto expand_ghost_adjacency(OrientedGraph const& g) -> OrientedGraph {
  if (g.mode_ != OrientedGraph::Mode::plain) {
    fail(ErrorKind::mode, "ghost expansion requires a plain oriented graph");
  }
  std::size_t const n = g.num_local();
  GhostTable const& ghosts = g.dir_.ghosts();

  std::vector<std::size_t> ghost_count(ghosts.size(), 0);
  for (auto const& key : g.in_targets_) {
    ++ghost_count[*ghosts.index_of(key.id)];
  }

  OrientedGraph out;
  out.mode_ = OrientedGraph::Mode::expanded;
  out.pe_ = g.pe_;
  out.part_ = g.part_;
  out.dir_ = g.dir_;
  out.offsets_ = g.offsets_;
  out.offsets_.reserve(n + ghosts.size() + 1);
  for (std::size_t i = 0; i < ghosts.size(); ++i) {
    out.offsets_.push_back(out.offsets_.back() + ghost_count[i]);
  }
  out.targets_ = g.targets_;
  out.targets_.resize(out.offsets_.back());

  std::vector<std::size_t> fill(out.offsets_.begin() + static_cast<std::ptrdiff_t>(n), out.offsets_.end() - 1);
  for (std::size_t row = 0; row < n; ++row) {
    DegreeOrderKey const kv = *g.dir_.key_of(g.row_vertex(row));
    for (auto const& key : g.incoming_cut(row)) {
      out.targets_[fill[*ghosts.index_of(key.id)]++] = kv;
    }
  }
  // Local rows are filled in increasing key order already, but incoming
  // edges of one ghost come from rows in id order.
  for (std::size_t i = 0; i < ghosts.size(); ++i) {
    std::sort(out.targets_.begin() + static_cast<std::ptrdiff_t>(out.offsets_[n + i]),
              out.targets_.begin() + static_cast<std::ptrdiff_t>(out.offsets_[n + i + 1]));
  }
  return out;
}

auto contract_to_cut(OrientedGraph const& g) -> OrientedGraph {
  OrientedGraph out;
  out.mode_ = OrientedGraph::Mode::contracted;
  out.pe_ = g.pe_;
  out.part_ = g.part_;
  out.dir_ = g.dir_;
  std::size_t const n = g.num_local();
  out.offsets_.assign(1, 0);
  out.offsets_.reserve(n + 1);
  for (std::size_t row = 0; row < n; ++row) {
    for (auto const& key : g.out(row)) {
      if (!g.is_local(key.id)) {
        out.targets_.push_back(key);
      }
    }
    out.offsets_.push_back(out.targets_.size());
  }
  return out;
}

auto orient_whole_graph(std::span<Edge const> edges, VertexId n) -> OrientedGraph {
  Partition const part = Partition(std::vector<VertexId>{0, n});
  return orient_and_sort(LocalGraph::build(edges, part, 0), {});
}

}  // namespace tricount::graph
