#include "tricount/io/normalize.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace tricount::io {

auto simplify(std::vector<Edge> edges) -> std::vector<Edge> {
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
  std::erase_if(edges, [](Edge const& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

auto normalize(std::vector<Edge> edges) -> NormalizedGraph {
  NormalizedGraph g;
  g.edges = simplify(std::move(edges));
  g.original_id.reserve(g.edges.size());
  for (auto const& [u, v] : g.edges) {
    g.original_id.push_back(u);
    g.original_id.push_back(v);
  }
  std::sort(g.original_id.begin(), g.original_id.end());
  g.original_id.erase(std::unique(g.original_id.begin(), g.original_id.end()), g.original_id.end());
  g.n = g.original_id.size();
  auto const dense = [&](VertexId old) -> VertexId {
    return static_cast<VertexId>(std::lower_bound(g.original_id.begin(), g.original_id.end(), old) -
                                 g.original_id.begin());
  };
  for (auto& [u, v] : g.edges) {
    u = dense(u);
    v = dense(v);
  }
  // The map is monotone, so the edge list stays sorted.
  return g;
}

void write_remap(std::ostream& out, NormalizedGraph const& g) {
  out << "# new old\n";
  for (VertexId v = 0; v < g.n; ++v) {
    out << v << ' ' << g.original_id[v] << '\n';
  }
}

namespace {

auto parse_error(std::size_t line, std::string const& what) -> Error {
  return Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

auto is_space(char c) -> bool { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

auto read_edge_list(std::istream& in) -> std::vector<Edge> {
  constexpr VertexId kMaxId = std::numeric_limits<std::int64_t>::max();
  std::vector<Edge> edges;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view rest = line;
    auto skip_space = [&] {
      while (!rest.empty() && is_space(rest.front())) rest.remove_prefix(1);
    };
    skip_space();
    if (rest.empty() || rest.front() == '#') continue;
    std::array<VertexId, 2> ids{};
    for (auto& id : ids) {
      skip_space();
      auto const [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), id);
      if (ec == std::errc::result_out_of_range || (ec == std::errc{} && id > kMaxId)) {
        throw parse_error(number, "vertex id out of range");
      }
      if (ec != std::errc{} || (ptr != rest.data() + rest.size() && !is_space(*ptr))) {
        throw parse_error(number, "expected two vertex ids, got '" + line + "'");
      }
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    }
    skip_space();
    if (!rest.empty()) {
      throw parse_error(number, "trailing characters in '" + line + "'");
    }
    edges.emplace_back(ids[0], ids[1]);
  }
  if (in.bad()) {
    fail(ErrorKind::io, "read error after line " + std::to_string(number));
  }
  return edges;
}

auto read_edge_list(std::string const& path) -> std::vector<Edge> {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::io, "cannot open '" + path + "'");
  }
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, std::span<Edge const> edges) {
  for (auto const& [u, v] : edges) {
    out << u << ' ' << v << '\n';
  }
}

auto partition_contiguous(VertexId n, PeId p) -> graph::Partition { return graph::Partition::balanced(n, p); }

auto distribute(std::span<Edge const> edges, graph::Partition const& part) -> std::vector<std::vector<Edge>> {
  std::vector<std::vector<Edge>> out(part.num_pes());
  for (auto const& e : edges) {
    PeId const ru = part.rank_of(e.first);
    PeId const rv = part.rank_of(e.second);
    out[ru].push_back(e);
    if (rv != ru) out[rv].push_back(e);
  }
  return out;
}

}  // namespace tricount::io
