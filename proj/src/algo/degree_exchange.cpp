#include "tricount/algo/degree_exchange.hpp"

#include <algorithm>
#include <string>

#include "tricount/runtime/collectives.hpp"

namespace tricount::algo {

void ghost_owners(std::span<graph::DegreeOrderKey const> members, graph::DegreeDirectory const& dir,
                  std::vector<PeId>& out) {
  out.clear();
  for (auto const& key : members) {
    if (dir.is_local(key.id)) continue;
    auto const idx = dir.ghosts().index_of(key.id);
    if (!idx) {
      fail(ErrorKind::protocol, "vertex " + std::to_string(key.id) + " is neither local nor a ghost");
    }
    out.push_back(dir.ghosts().owner(*idx));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

auto exchange_ghost_degrees(runtime::Cluster& cluster, std::span<graph::LocalGraph const> graphs, ExchangeMode mode,
                            runtime::RunOptions options) -> DegreeExchangeResult {
  PeId const p = cluster.num_pes();
  if (graphs.size() != p) {
    fail(ErrorKind::collective, "degree exchange needs one local graph per PE");
  }
  std::vector<runtime::PeerPayloads> outgoing(p);
  std::vector<PeId> owners;
  for (PeId i = 0; i < p; ++i) {
    graph::LocalGraph const& g = graphs[i];
    std::vector<std::vector<Word>> per_dst(p);
    for (VertexId v = g.first(); v < g.last(); ++v) {
      owners.clear();
      for (VertexId x : g.neighbors(v)) {
        if (!g.is_local(x)) {
          owners.push_back(g.partition().rank_of(x));
        }
      }
      std::sort(owners.begin(), owners.end());
      owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
      for (PeId dst : owners) {
        per_dst[dst].push_back(v);
        per_dst[dst].push_back(g.local_degree(v));
      }
    }
    for (PeId dst = 0; dst < p; ++dst) {
      if (!per_dst[dst].empty()) {
        outgoing[i].emplace_back(dst, std::move(per_dst[dst]));
      }
    }
  }

  runtime::ExchangeResult exchanged = mode == ExchangeMode::sparse
                                          ? runtime::sparse_all_to_all(cluster, runtime::Tag::degree, outgoing, options)
                                          : runtime::dense_all_to_all(cluster, runtime::Tag::degree, outgoing);

  DegreeExchangeResult result;
  result.cost = std::move(exchanged.cost);
  result.ghost_degrees.resize(p);
  for (PeId i = 0; i < p; ++i) {
    graph::GhostTable const& ghosts = graphs[i].ghosts();
    graph::GhostDegrees& degrees = result.ghost_degrees[i];
    degrees.reserve(ghosts.size());
    for (auto const& [src, words] : exchanged.received[i]) {
      if (words.size() % 2 != 0) {
        fail(ErrorKind::protocol, "malformed degree payload");
      }
      for (std::size_t k = 0; k < words.size(); k += 2) {
        if (!ghosts.contains(words[k])) {
          fail(ErrorKind::protocol, "PE " + std::to_string(i) + " received the degree of unknown vertex " +
                                        std::to_string(words[k]));
        }
        degrees[words[k]] = words[k + 1];
      }
    }
    if (degrees.size() != ghosts.size()) {
      fail(ErrorKind::protocol, "PE " + std::to_string(i) + " is missing " +
                                    std::to_string(ghosts.size() - degrees.size()) + " ghost degrees");
    }
  }
  return result;
}

}  // namespace tricount::algo
