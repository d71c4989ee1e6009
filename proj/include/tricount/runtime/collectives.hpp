#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tricount/runtime/cluster.hpp"

namespace tricount::runtime {

/// Payloads of one PE keyed by peer (destination when sending, source when
/// receiving), sorted by peer.
using PeerPayloads = std::vector<std::pair<PeId, std::vector<Word>>>;

struct ExchangeResult {
  /// received[i] holds what PE i got, sorted by source; empty payloads omitted.
  std::vector<PeerPayloads> received;
  CostReport cost;
};

/// Each PE hands one payload per partner; only partners are contacted.
/// Runs through the aggregation queue, so `options.indirect` applies.
auto sparse_all_to_all(Cluster& cluster, Tag tag, std::vector<PeerPayloads> const& outgoing,
                       RunOptions options = {}) -> ExchangeResult;

/// Same contract as sparse_all_to_all, realized as p - 1 direct exchanges per
/// PE. Zero-length exchanges are not billed.
auto dense_all_to_all(Cluster& cluster, Tag tag, std::vector<PeerPayloads> const& outgoing) -> ExchangeResult;

/// Sum of one value per PE. Control plane; not billed.
auto allreduce_sum(Cluster const& cluster, std::vector<std::uint64_t> const& values) -> std::uint64_t;

}  // namespace tricount::runtime
