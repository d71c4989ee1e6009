#pragma once

#include <span>
#include <vector>

#include "tricount/graph/local_graph.hpp"
#include "tricount/graph/oriented_graph.hpp"
#include "tricount/runtime/cluster.hpp"

namespace tricount::algo {

enum class ExchangeMode { sparse, dense };

struct DegreeExchangeResult {
  /// Ghost degrees learned by each PE.
  std::vector<graph::GhostDegrees> ghost_degrees;
  runtime::CostReport cost;
};

/// Every interface vertex pushes (v, d_v) once to each distinct PE owning one
/// of its neighbors. Throws protocol if a PE ends up missing a ghost degree or
/// receives one for a vertex it does not know.
auto exchange_ghost_degrees(runtime::Cluster& cluster, std::span<graph::LocalGraph const> graphs, ExchangeMode mode,
                            runtime::RunOptions options = {}) -> DegreeExchangeResult;

/// Distinct owners of the ghosts among `members`, ascending.
void ghost_owners(std::span<graph::DegreeOrderKey const> members, graph::DegreeDirectory const& dir,
                  std::vector<PeId>& out);

}  // namespace tricount::algo
