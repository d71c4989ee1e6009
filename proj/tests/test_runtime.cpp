#include <doctest.h>

#include <map>
#include <random>

#include "support.hpp"
#include "tricount/runtime/aggregation_queue.hpp"
#include "tricount/runtime/cluster.hpp"
#include "tricount/runtime/collectives.hpp"

using namespace tricount;
using namespace tricount::runtime;

namespace {

auto config_with(PeId p, std::optional<std::size_t> threshold = std::nullopt, bool trace = false) -> ClusterConfig {
  ClusterConfig c;
  c.num_pes = p;
  c.threshold = threshold;
  c.trace = trace;
  return c;
}

/// Runs a one-shot program: every PE posts its list once, handlers record
/// (origin, receiver, payload).
struct Delivery {
  PeId origin;
  PeId receiver;
  std::vector<Word> payload;
  friend auto operator<=>(Delivery const&, Delivery const&) = default;
};

using Plan = std::vector<std::vector<std::pair<PeId, std::vector<Word>>>>;

auto random_plan(PeId p, std::uint64_t seed, std::size_t per_pe) -> Plan {
  std::mt19937_64 rng(seed);
  Plan plan(p);
  for (PeId i = 0; i < p; ++i) {
    std::size_t const count = rng() % (per_pe + 1);
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<Word> payload(rng() % 12);
      for (auto& w : payload) w = rng();
      plan[i].emplace_back(static_cast<PeId>(rng() % p), std::move(payload));
    }
  }
  return plan;
}

auto execute(Cluster& cluster, Plan const& plan, RunOptions options, std::vector<Delivery>& got) -> CostReport {
  std::mutex mutex;
  return cluster.run_until_quiescent(
      [&](PeContext& pe) -> StepFn {
        pe.on(Tag::control, [&](PeContext& self, RecordView const& r) {
          std::lock_guard const lock(mutex);
          got.push_back({r.origin, self.rank(), {r.payload.begin(), r.payload.end()}});
        });
        return [&](PeContext& self) {
          for (auto const& [dst, payload] : plan[self.rank()]) self.post(dst, Tag::control, payload);
          return Progress::done;
        };
      },
      options);
}

auto expected_deliveries(Plan const& plan) -> std::vector<Delivery> {
  std::vector<Delivery> out;
  for (PeId i = 0; i < plan.size(); ++i) {
    for (auto const& [dst, payload] : plan[i]) out.push_back({i, dst, payload});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("records round-trip through framing") {
  std::vector<Word> buffer;
  std::vector<Word> const a{1, 2, 3};
  std::vector<Word> const b;
  append_record(buffer, {Tag::neighborhood, 5, 77, a.size()}, a);
  append_record(buffer, {Tag::amq, kMaxPes - 1, 0, 0}, b);
  CHECK(buffer.size() == a.size() + 2 * kHeaderWords);
  std::vector<RecordView> seen;
  for_each_record(buffer, [&](RecordView const& r) { seen.push_back(r); });
  REQUIRE(seen.size() == 2);
  CHECK(seen[0].tag == Tag::neighborhood);
  CHECK(seen[0].origin == 5);
  CHECK(seen[0].final_dst == 77);
  CHECK(std::vector<Word>(seen[0].payload.begin(), seen[0].payload.end()) == a);
  CHECK(seen[1].origin == kMaxPes - 1);
  CHECK(seen[1].payload.empty());

  buffer.pop_back();
  buffer.pop_back();
  buffer.pop_back();
  CHECK_THROWS_AS(for_each_record(buffer, [](RecordView const&) {}), Error);
}

TEST_CASE("aggregation queue flushes once B exceeds the threshold") {
  AggregationQueue q(8);
  std::vector<Word> const three{1, 2, 3};
  CHECK_FALSE(q.append(1, {Tag::control, 0, 1, 3}, three));
  CHECK_FALSE(q.append(1, {Tag::control, 0, 1, 3}, three));
  CHECK(q.buffered_words() == 6);
  CHECK(q.append(1, {Tag::control, 0, 1, 3}, three));
  CHECK(q.high_water_mark() == 9);
  auto const taken = q.take_all();
  REQUIRE(taken.size() == 1);
  CHECK(taken[0].second.payload_words == 9);
  CHECK(taken[0].second.records == 3);
  CHECK(taken[0].second.words.size() == 9 + 3 * kHeaderWords);
  CHECK(q.empty());
  CHECK(q.buffered_words() == 0);
  CHECK(q.is_oversize(9));
  CHECK_FALSE(q.is_oversize(8));

  CHECK_FALSE(q.append(3, {Tag::control, 0, 3, 1}, std::vector<Word>{1}));
  CHECK_FALSE(q.append(2, {Tag::control, 0, 5, 1}, std::vector<Word>{1}));
  CHECK(q.has_forwarding());
  auto const fwd = q.take_forwarding();
  REQUIRE(fwd.size() == 1);
  CHECK(fwd[0].first == 2);
  CHECK(q.buffered_words() == 1);
  CHECK_FALSE(q.has_forwarding());
}

TEST_CASE("threshold example on a running cluster") {
  Cluster cluster(config_with(2, 8, true));
  std::vector<std::size_t> sent_after;
  std::size_t received = 0;
  auto const cost = cluster.run_until_quiescent([&](PeContext& pe) -> StepFn {
    pe.on(Tag::control, [&](PeContext&, RecordView const& r) { received += r.payload.size(); });
    if (pe.rank() != 0) return {};
    return [&](PeContext& self) {
      std::vector<Word> const payload{7, 8, 9};
      for (int i = 0; i < 3; ++i) {
        self.post(1, Tag::control, payload);
        sent_after.push_back(self.counters().messages_sent);
      }
      return Progress::done;
    };
  });
  CHECK(sent_after == std::vector<std::size_t>{0, 0, 1});
  CHECK(received == 9);
  CHECK(cost.pe(0).messages_sent == 1);
  CHECK(cost.pe(0).words_sent == 9 + 3 * kHeaderWords);
  CHECK(cost.pe(1).messages_received == 1);
  REQUIRE(cluster.last_trace().hops.size() == 1);
  CHECK(cluster.last_trace().hops[0].records == 3);
  CHECK(cost.buffer_bound_violations == 0);
  CHECK(cost.max_buffered_words == 9);
}

TEST_CASE("self posts are free and distinct destinations get distinct envelopes") {
  PeId const p = 6;
  Cluster cluster(config_with(p));
  std::vector<std::size_t> hits(p, 0);
  auto const cost = cluster.run_until_quiescent([&](PeContext& pe) -> StepFn {
    pe.on(Tag::control, [&](PeContext& self, RecordView const&) { ++hits[self.rank()]; });
    if (pe.rank() != 0) return {};
    return [](PeContext& self) {
      std::vector<Word> const w{1};
      for (PeId d = 0; d < self.num_pes(); ++d) self.post(d, Tag::control, w);
      return Progress::done;
    };
  });
  CHECK(hits == std::vector<std::size_t>(p, 1));
  CHECK(cost.pe(0).messages_sent == p - 1);
  CHECK(cost.total_messages() == p - 1);

  Cluster alone(config_with(1));
  auto const solo = alone.run_until_quiescent([](PeContext& pe) -> StepFn {
    pe.on(Tag::control, [](PeContext&, RecordView const&) {});
    return [](PeContext& self) {
      self.post(0, Tag::control, std::vector<Word>{1, 2});
      return Progress::done;
    };
  });
  CHECK(solo.total_messages() == 0);
  CHECK(solo.total_words() == 0);
}

TEST_CASE("poll behavior") {
  Cluster cluster(config_with(2));
  std::size_t first_poll = 99;
  std::size_t handled = 0;
  cluster.run_until_quiescent([&](PeContext& pe) -> StepFn {
    pe.on(Tag::control, [&](PeContext&, RecordView const&) { ++handled; });
    if (pe.rank() != 0) return {};
    return [&](PeContext& self) {
      first_poll = self.poll();
      for (int i = 0; i < 3; ++i) self.post(0, Tag::control, std::vector<Word>{1});
      CHECK(self.poll() == 3);
      return Progress::done;
    };
  });
  CHECK(first_poll == 0);
  CHECK(handled == 3);

  SUBCASE("unknown tag") {
    try {
      cluster.run_until_quiescent([](PeContext&) -> StepFn {
        return [](PeContext& self) {
          self.post(1 - self.rank(), Tag::amq, std::vector<Word>{1});
          return Progress::done;
        };
      });
      FAIL("expected dispatch error");
    } catch (Error const& e) {
      CHECK(e.kind() == ErrorKind::dispatch);
    }
  }
  SUBCASE("bad destination") {
    CHECK_THROWS_AS(cluster.run_until_quiescent([](PeContext&) -> StepFn {
      return [](PeContext& self) {
        self.post(9, Tag::control, std::vector<Word>{});
        return Progress::done;
      };
    }),
                    Error);
  }
}

TEST_CASE("idle programs cost nothing and ping-pong terminates") {
  Cluster cluster(config_with(5));
  auto const idle = cluster.run_until_quiescent([](PeContext&) -> StepFn { return {}; });
  CHECK(idle.total_messages() == 0);
  CHECK(idle.num_pes() == 5);

  std::size_t rounds = 0;
  auto const cost = cluster.run_until_quiescent([&](PeContext& pe) -> StepFn {
    pe.on(Tag::control, [&](PeContext& self, RecordView const& r) {
      ++rounds;
      if (r.payload[0] > 0) self.post(r.origin, Tag::control, std::vector<Word>{r.payload[0] - 1});
    });
    if (pe.rank() != 0) return {};
    return [](PeContext& self) {
      self.post(4, Tag::control, std::vector<Word>{9});
      return Progress::done;
    };
  });
  CHECK(rounds == 10);
  CHECK(cost.total_messages() == 10);
  CHECK(cost.pe(0).messages_sent == 5);
  CHECK(cost.pe(4).messages_sent == 5);
}

TEST_CASE("step budget turns a livelock into an error") {
  auto config = config_with(2);
  config.step_budget = 100;
  Cluster cluster(config);
  try {
    cluster.run_until_quiescent([](PeContext&) -> StepFn { return [](PeContext&) { return Progress::more; }; });
    FAIL("expected livelock");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::livelock);
  }
  // The cluster is usable afterwards.
  auto const cost = cluster.run_until_quiescent([](PeContext&) -> StepFn { return {}; });
  CHECK(cost.total_messages() == 0);
}

TEST_CASE("every record arrives exactly once") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    PeId const p = 1 + seed % 11;
    auto const plan = random_plan(p, seed, 30);
    for (bool indirect : {false, true}) {
      for (std::size_t delta : {std::size_t{1}, std::size_t{16}, kMinThreshold}) {
        Cluster cluster(config_with(p, delta));
        std::vector<Delivery> got;
        auto const cost = execute(cluster, plan, {indirect}, got);
        std::sort(got.begin(), got.end());
        CHECK(got == expected_deliveries(plan));

        std::uint64_t sent = 0;
        std::uint64_t recv = 0;
        std::uint64_t msg_sent = 0;
        std::uint64_t msg_recv = 0;
        for (auto const& pe : cost.per_pe()) {
          sent += pe.words_sent;
          recv += pe.words_received;
          msg_sent += pe.messages_sent;
          msg_recv += pe.messages_received;
        }
        CHECK(sent == recv);
        CHECK(msg_sent == msg_recv);
        CHECK(cost.total_records_sent(Tag::control) == cost.total_records_received(Tag::control));
        CHECK(cost.buffer_bound_violations == 0);
        CHECK(cost.max_buffered_words <= delta + cost.max_record_words);
        if (!indirect) {
          std::uint64_t remote = 0;
          for (PeId i = 0; i < p; ++i) {
            for (auto const& [dst, payload] : plan[i]) remote += dst != i ? 1 : 0;
          }
          CHECK(cost.total_records_sent(Tag::control) == remote);
        }
      }
    }
  }
}

TEST_CASE("deterministic scheduler is reproducible and the threaded one agrees on content") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PeId const p = 2 + seed % 9;
    auto const plan = random_plan(p, seed + 100, 40);
    std::vector<Delivery> a;
    std::vector<Delivery> b;
    std::vector<Delivery> c;
    Cluster c1(config_with(p, 32));
    Cluster c2(config_with(p, 32));
    auto const cost_a = execute(c1, plan, {true}, a);
    auto const cost_b = execute(c2, plan, {true}, b);
    CHECK(cost_a == cost_b);
    CHECK(a == b);

    auto threaded = config_with(p, 32);
    threaded.scheduler = Scheduler::threaded;
    Cluster c3(threaded);
    auto const cost_c = execute(c3, plan, {true}, c);
    std::sort(a.begin(), a.end());
    std::sort(c.begin(), c.end());
    CHECK(a == c);
    CHECK(cost_c.total_records_received(Tag::control) == cost_a.total_records_received(Tag::control));
  }
}

TEST_CASE("threaded scheduler reports handler errors") {
  auto config = config_with(4);
  config.scheduler = Scheduler::threaded;
  Cluster cluster(config);
  CHECK_THROWS_AS(cluster.run_until_quiescent([](PeContext& pe) -> StepFn {
    pe.on(Tag::control, [](PeContext&, RecordView const&) { fail(ErrorKind::protocol, "boom"); });
    return [](PeContext& self) {
      self.post((self.rank() + 1) % self.num_pes(), Tag::control, std::vector<Word>{1});
      return Progress::done;
    };
  }),
                  Error);
}

TEST_CASE("thresholds default to the floor and honor overrides") {
  Cluster cluster(config_with(3));
  CHECK(cluster.threshold(0) == kMinThreshold);
  cluster.set_threshold(1, 1000);
  CHECK(cluster.threshold(1) == 1000);
  Cluster fixed(config_with(3, 5));
  fixed.set_threshold(1, 1000);
  CHECK(fixed.threshold(1) == 5);
}

TEST_CASE("cost model arithmetic") {
  CostReport r({2.0, 0.5}, 2);
  r.pe(0).messages_sent = 3;
  r.pe(0).words_sent = 10;
  r.pe(1).messages_sent = 1;
  r.pe(1).words_sent = 30;
  CHECK(r.modeled_time_of(0) == doctest::Approx(11.0));
  CHECK(r.modeled_time_of(1) == doctest::Approx(17.0));
  CHECK(r.modeled_time() == doctest::Approx(17.0));
  CHECK(r.max_words_sent() == 30);
  CHECK(r.total_messages() == 4);
  CHECK(r.mean_words_sent() == doctest::Approx(20.0));
  CostReport s = r;
  s += r;
  CHECK(s.pe(1).words_sent == 60);
}

TEST_CASE("sparse and dense all-to-all") {
  SUBCASE("empty") {
    Cluster cluster(config_with(4));
    std::vector<PeerPayloads> const nothing(4);
    auto const s = sparse_all_to_all(cluster, Tag::degree, nothing);
    auto const d = dense_all_to_all(cluster, Tag::degree, nothing);
    CHECK(s.cost.total_messages() == 0);
    CHECK(d.cost.total_messages() == 0);
    for (auto const& r : s.received) CHECK(r.empty());
  }
  SUBCASE("ring") {
    PeId const p = 7;
    Cluster cluster(config_with(p));
    std::vector<PeerPayloads> out(p);
    for (PeId i = 0; i < p; ++i) out[i].push_back({(i + 1) % p, {i, i * 10}});
    auto const s = sparse_all_to_all(cluster, Tag::degree, out);
    for (PeId i = 0; i < p; ++i) {
      PeId const from = (i + p - 1) % p;
      REQUIRE(s.received[i].size() == 1);
      CHECK(s.received[i][0].first == from);
      CHECK(s.received[i][0].second == std::vector<Word>{from, from * 10});
      CHECK(s.cost.pe(i).messages_sent == 1);
    }
  }
  SUBCASE("all to one") {
    PeId const p = 9;
    Cluster cluster(config_with(p));
    std::vector<PeerPayloads> out(p);
    for (PeId i = 0; i < p; ++i) out[i].push_back({0, {i}});
    auto const s = sparse_all_to_all(cluster, Tag::degree, out);
    CHECK(s.received[0].size() == p);
    CHECK(s.cost.pe(0).messages_received == p - 1);
  }
  SUBCASE("random payloads agree between flavors") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      PeId const p = 1 + seed % 8;
      std::mt19937_64 rng(seed);
      std::vector<PeerPayloads> out(p);
      for (PeId i = 0; i < p; ++i) {
        for (PeId j = 0; j < p; ++j) {
          if (rng() % 3 == 0) continue;
          std::vector<Word> payload(1 + rng() % 5);
          for (auto& w : payload) w = rng() % 100;
          out[i].push_back({j, payload});
        }
      }
      Cluster cluster(config_with(p));
      auto const s = sparse_all_to_all(cluster, Tag::degree, out);
      auto const d = dense_all_to_all(cluster, Tag::degree, out);
      CHECK(s.received == d.received);
      CHECK(s.cost.total_words() == d.cost.total_words());
      CHECK(s.cost.total_messages() == d.cost.total_messages());
      for (PeId i = 0; i < p; ++i) {
        for (auto const& [src, payload] : s.received[i]) {
          auto const it = std::find_if(out[src].begin(), out[src].end(), [&](auto const& e) { return e.first == i; });
          REQUIRE(it != out[src].end());
          CHECK(it->second == payload);
        }
      }
    }
  }
  SUBCASE("size mismatch") {
    Cluster cluster(config_with(3));
    std::vector<PeerPayloads> const wrong(2);
    CHECK_THROWS_AS(sparse_all_to_all(cluster, Tag::degree, wrong), Error);
    CHECK_THROWS_AS(dense_all_to_all(cluster, Tag::degree, wrong), Error);
  }
}

TEST_CASE("allreduce") {
  Cluster cluster(config_with(4));
  CHECK(allreduce_sum(cluster, {1, 2, 3, 4}) == 10);
  CHECK_THROWS_AS(allreduce_sum(cluster, {1}), Error);
}
