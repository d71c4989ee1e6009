#include "tricount/runtime/collectives.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tricount::runtime {

namespace {

void check_participation(Cluster const& cluster, std::size_t inputs) {
  if (inputs != cluster.num_pes()) {
    fail(ErrorKind::collective, "collective called with " + std::to_string(inputs) + " inputs on " +
                                    std::to_string(cluster.num_pes()) + " PEs");
  }
}

void check_peers(Cluster const& cluster, PeerPayloads const& payloads) {
  for (auto const& [peer, words] : payloads) {
    if (peer >= cluster.num_pes()) {
      fail(ErrorKind::collective, "collective payload for PE " + std::to_string(peer));
    }
  }
}

void sort_by_peer(PeerPayloads& payloads) {
  std::stable_sort(payloads.begin(), payloads.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
}

}  // namespace

auto sparse_all_to_all(Cluster& cluster, Tag tag, std::vector<PeerPayloads> const& outgoing, RunOptions options)
    -> ExchangeResult {
  check_participation(cluster, outgoing.size());
  ExchangeResult result;
  result.received.resize(cluster.num_pes());
  for (auto const& payloads : outgoing) check_peers(cluster, payloads);

  result.cost = cluster.run_until_quiescent(
      [&](PeContext& ctx) -> StepFn {
        PeerPayloads& inbox = result.received[ctx.rank()];
        ctx.on(tag, [&inbox](PeContext&, RecordView const& r) {
          inbox.emplace_back(r.origin, std::vector<Word>(r.payload.begin(), r.payload.end()));
        });
        return [&outgoing, tag](PeContext& self) {
          for (auto const& [dst, words] : outgoing[self.rank()]) {
            if (!words.empty()) {
              self.post(dst, tag, words);
            }
          }
          return Progress::done;
        };
      },
      options);
  for (auto& payloads : result.received) sort_by_peer(payloads);
  return result;
}

auto dense_all_to_all(Cluster& cluster, Tag tag, std::vector<PeerPayloads> const& outgoing) -> ExchangeResult {
  check_participation(cluster, outgoing.size());
  PeId const p = cluster.num_pes();
  ExchangeResult result;
  result.received.resize(p);
  result.cost = CostReport(cluster.config().cost, p);
  for (PeId src = 0; src < p; ++src) {
    check_peers(cluster, outgoing[src]);
    // Gather everything src has for each peer into one exchange slot.
    std::vector<std::vector<Word>> slots(p);
    for (auto const& [dst, words] : outgoing[src]) {
      slots[dst].insert(slots[dst].end(), words.begin(), words.end());
    }
    for (PeId dst = 0; dst < p; ++dst) {
      if (slots[dst].empty()) {
        continue;
      }
      cluster.bill_direct(result.cost, src, dst, tag, slots[dst].size());
      result.received[dst].emplace_back(src, std::move(slots[dst]));
    }
  }
  for (auto& payloads : result.received) sort_by_peer(payloads);
  return result;
}

auto allreduce_sum(Cluster const& cluster, std::vector<std::uint64_t> const& values) -> std::uint64_t {
  check_participation(cluster, values.size());
  return std::accumulate(values.begin(), values.end(), std::uint64_t{0});
}

}  // namespace tricount::runtime
