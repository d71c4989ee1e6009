#include <doctest.h>

#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "support.hpp"
#include "tricount/algo/amq.hpp"
#include "tricount/algo/degree_exchange.hpp"
#include "tricount/algo/surrogate.hpp"
#include "tricount/algo/triangle_count.hpp"
#include "tricount/graph/oriented_graph.hpp"
#include "tricount/seq/sequential.hpp"

using namespace tricount;
using algo::Algorithm;
using algo::ExchangeMode;

namespace {

auto true_degrees(std::vector<Edge> const& edges, VertexId n) -> std::vector<Degree> {
  std::vector<Degree> d(n, 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

/// Δ oracle padded to n; trailing isolated vertices have no edge to size it.
auto deltas_of(std::vector<Edge> const& edges, VertexId n) -> seq::PerVertexDelta {
  auto d = seq::per_vertex_deltas(edges);
  d.resize(n, 0);
  return d;
}

struct Case {
  std::vector<Edge> edges;
  VertexId n;
};

auto suite() -> std::vector<Case> {
  std::vector<Case> out;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    VertexId const n = 20 + seed * 7;
    out.push_back({io::gen_gnm(n, n * 4, seed), n});
  }
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    io::GeneratorSpec spec;
    spec.family = io::Family::rgg2d;
    spec.n = 100 + seed * 20;
    spec.edgefactor = 8;
    spec.seed = seed;
    out.push_back({io::generate(spec), spec.n});
  }
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    io::GeneratorSpec spec;
    spec.family = io::Family::rmat;
    spec.scale = 7;
    spec.n = 128;
    spec.edgefactor = 8;
    spec.seed = seed;
    out.push_back({io::generate(spec), 128});
  }
  return out;
}

}  // namespace

TEST_CASE("algorithm names") {
  for (auto a : testing::kAllAlgorithms) CHECK(algo::parse_algorithm(algo::algorithm_name(a)) == a);
  CHECK_FALSE(algo::parse_algorithm("seq").has_value());
  CHECK(algo::uses_indirection(Algorithm::cetric2));
  CHECK_FALSE(algo::uses_indirection(Algorithm::ditric));
  CHECK(algo::is_cetric(Algorithm::cetric2));
  CHECK_FALSE(algo::is_cetric(Algorithm::ditric2));
}

TEST_CASE("degree exchange") {
  SUBCASE("split path") {
    auto const edges = testing::path_graph(4);
    runtime::Cluster cluster({2});
    auto const graphs = testing::local_graphs(edges, 4, 2);
    auto const r = algo::exchange_ghost_degrees(cluster, graphs, ExchangeMode::sparse);
    CHECK(r.ghost_degrees[0] == graph::GhostDegrees{{2, 2}});
    CHECK(r.ghost_degrees[1] == graph::GhostDegrees{{1, 2}});
    CHECK(r.cost.pe(0).messages_sent == 1);
    CHECK(r.cost.pe(1).messages_sent == 1);
  }
  SUBCASE("star over four PEs") {
    auto const edges = testing::star_graph(7);
    runtime::Cluster cluster({4});
    auto const graphs = testing::local_graphs(edges, 8, 4);
    for (auto mode : {ExchangeMode::sparse, ExchangeMode::dense}) {
      auto const r = algo::exchange_ghost_degrees(cluster, graphs, mode);
      for (PeId i = 1; i < 4; ++i) CHECK(r.ghost_degrees[i] == graph::GhostDegrees{{0, 7}});
      graph::GhostDegrees leaves;
      for (VertexId v = 2; v < 8; ++v) leaves[v] = 1;
      CHECK(r.ghost_degrees[0] == leaves);
      CHECK(r.cost.pe(0).messages_sent == 3);
      CHECK(r.cost.max_messages_received() == 3);
    }
  }
  SUBCASE("no cut edges") {
    std::vector<Edge> const edges{{0, 1}, {2, 3}};
    runtime::Cluster cluster({2});
    auto const r = algo::exchange_ghost_degrees(cluster, testing::local_graphs(edges, 4, 2), ExchangeMode::sparse);
    CHECK(r.ghost_degrees[0].empty());
    CHECK(r.cost.total_messages() == 0);
  }
  SUBCASE("random graphs learn every ghost degree") {
    for (auto const& c : suite()) {
      auto const degree = true_degrees(c.edges, c.n);
      for (PeId p : {3U, 8U}) {
        runtime::Cluster cluster({p});
        auto const graphs = testing::local_graphs(c.edges, c.n, p);
        auto const sparse = algo::exchange_ghost_degrees(cluster, graphs, ExchangeMode::sparse);
        auto const dense = algo::exchange_ghost_degrees(cluster, graphs, ExchangeMode::dense);
        CHECK(sparse.ghost_degrees == dense.ghost_degrees);
        CHECK(sparse.cost.total_words() == dense.cost.total_words());
        for (PeId i = 0; i < p; ++i) {
          CHECK(sparse.ghost_degrees[i].size() == graphs[i].ghosts().size());
          for (auto [v, d] : sparse.ghost_degrees[i]) CHECK(d == degree[v]);
        }
      }
    }
  }
}

TEST_CASE("neighborhood records") {
  std::vector<Edge> const edges{{0, 1}, {1, 2}, {2, 3}};
  auto const g = testing::local_graphs(edges, 4, 2)[0];
  auto const o = graph::orient_and_sort(g, {{2, 2}});
  std::vector<graph::DegreeOrderKey> const members{{1, 0}, {2, 2}};
  std::vector<Word> payload;
  algo::encode_neighborhood(9, members, payload);
  CHECK(payload == std::vector<Word>{9, 2, 0, 2});

  std::vector<Word> const foreign{7, 3, 0, 2, 3};
  std::vector<graph::DegreeOrderKey> out;
  CHECK(algo::decode_neighborhood(foreign, o.directory(), out) == 7);
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == 0);
  CHECK(out[1].id == 2);
  CHECK(out[1].degree == 2);
  std::vector<Word> const bad{7, 4, 0};
  CHECK_THROWS_AS(algo::decode_neighborhood(bad, o.directory(), out), Error);
}

TEST_CASE("surrogate state drops repeats of the last destination") {
  algo::SurrogateState s;
  std::vector<PeId> sent;
  for (PeId dst : {1U, 1U, 2U, 2U, 1U}) {
    if (s.should_send(1, dst)) sent.push_back(dst);
  }
  CHECK(sent == std::vector<PeId>{1, 2, 1});
  CHECK(s.should_send(2, 1));
  s.clear();
  CHECK(s.should_send(1, 1));
}

TEST_CASE("K4 split over two PEs") {
  auto const edges = testing::complete_graph(4);
  for (auto a : testing::kAllAlgorithms) {
    auto const r = testing::run_algorithm(edges, 4, 2, testing::options_for(a));
    CHECK(r.total == 4);
    CHECK(r.local_phase + r.global_phase == 4);
    if (algo::is_cetric(a)) {
      CHECK(r.local_phase == 4);
      CHECK(r.global_phase == 0);
    }
  }
}

TEST_CASE("phase layout") {
  auto const edges = testing::complete_graph(6);
  auto options = testing::options_for(Algorithm::cetric);
  options.compute_lcc = true;
  auto const c = testing::run_algorithm(edges, 6, 3, options);
  std::vector<std::string> names;
  for (auto const& ph : c.phases) names.push_back(ph.name);
  CHECK(names == std::vector<std::string>{"preprocessing", "local_phase", "contraction", "global_phase", "aggregation"});
  CHECK(c.phase("global_phase") != nullptr);
  CHECK(c.phase("nope") == nullptr);
  // Local computation phases do not talk.
  CHECK(c.phase("local_phase")->cost.total_messages() == 0);
  CHECK(c.phase("contraction")->cost.total_messages() == 0);

  auto const d = testing::run_algorithm(edges, 6, 3, testing::options_for(Algorithm::ditric));
  names.clear();
  for (auto const& ph : d.phases) names.push_back(ph.name);
  CHECK(names == std::vector<std::string>{"preprocessing", "counting"});

  runtime::CostReport sum(d.cost.model(), 3);
  for (auto const& ph : d.phases) sum += ph.cost;
  CHECK(sum.per_pe() == d.cost.per_pe());
}

TEST_CASE("trees have no triangles") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    VertexId const n = 30 + seed * 11;
    auto const edges = testing::random_tree(n, seed);
    for (auto a : testing::kAllAlgorithms) {
      for (PeId p : {1U, 4U, 9U}) {
        CHECK(testing::run_algorithm(edges, n, p, testing::options_for(a)).total == 0);
      }
    }
  }
}

TEST_CASE("all variants match the oracle and the cut-graph split") {
  for (auto const& c : suite()) {
    auto const expected = seq::brute_force(c.edges);
    for (PeId p : {1U, 2U, 5U, 8U}) {
      auto const classes = seq::classify_triangles(c.edges, graph::Partition::balanced(c.n, p));
      for (auto a : testing::kAllAlgorithms) {
        for (auto mode : {ExchangeMode::sparse, ExchangeMode::dense}) {
          auto options = testing::options_for(a);
          options.exchange = mode;
          auto const r = testing::run_algorithm(c.edges, c.n, p, options);
          CHECK(r.total == expected);
          CHECK_FALSE(r.approximate);
          if (algo::is_cetric(a)) {
            CHECK(r.local_phase == classes.t1 + classes.t2);
            CHECK(r.global_phase == classes.t3);
          }
          CHECK(r.cost.buffer_bound_violations == 0);
        }
      }
    }
  }
}

TEST_CASE("triangle hook sees every triangle once") {
  for (auto const& c : suite()) {
    std::set<testing::Triple> brute;
    seq::for_each_triangle_brute(c.edges, [&](VertexId a, VertexId b, VertexId x) {
      brute.insert(testing::sorted_triple(a, b, x));
    });
    for (auto a : testing::kAllAlgorithms) {
      std::multiset<testing::Triple> seen;
      auto options = testing::options_for(a);
      options.on_triangle = [&](VertexId x, VertexId y, VertexId z) { seen.insert(testing::sorted_triple(x, y, z)); };
      (void)testing::run_algorithm(c.edges, c.n, 6, options);
      CHECK(std::set<testing::Triple>(seen.begin(), seen.end()) == brute);
      CHECK(seen.size() == brute.size());
    }
  }
}

TEST_CASE("threaded scheduler counts the same") {
  runtime::ClusterConfig config;
  config.scheduler = runtime::Scheduler::threaded;
  for (auto const& c : suite()) {
    auto const expected = seq::brute_force(c.edges);
    for (auto a : testing::kAllAlgorithms) {
      auto options = testing::options_for(a);
      options.compute_lcc = true;
      auto const r = testing::run_algorithm(c.edges, c.n, 4, options, config);
      CHECK(r.total == expected);
      CHECK(*r.delta == deltas_of(c.edges, c.n));
    }
  }
}

TEST_CASE("per-vertex aggregation") {
  SUBCASE("triangle on three PEs") {
    for (auto a : testing::kAllAlgorithms) {
      auto options = testing::options_for(a);
      options.compute_lcc = true;
      auto const r = testing::run_algorithm(testing::complete_graph(3), 3, 3, options);
      CHECK(*r.delta == seq::PerVertexDelta{1, 1, 1});
      for (double x : *r.lcc) CHECK(x == doctest::Approx(0.5));
    }
  }
  SUBCASE("random graphs") {
    for (auto const& c : suite()) {
      auto const expected = deltas_of(c.edges, c.n);
      auto const degree = true_degrees(c.edges, c.n);
      for (auto a : testing::kAllAlgorithms) {
        auto options = testing::options_for(a);
        options.compute_lcc = true;
        auto const r = testing::run_algorithm(c.edges, c.n, 7, options);
        REQUIRE(r.delta.has_value());
        CHECK(*r.delta == expected);
        std::uint64_t sum = 0;
        for (VertexId v = 0; v < c.n; ++v) {
          sum += (*r.delta)[v];
          CHECK((*r.lcc)[v] == doctest::Approx(seq::lcc(expected[v], degree[v])));
        }
        CHECK(sum == 3 * r.total);
      }
    }
  }
  SUBCASE("foreign delta is a protocol error") {
    auto const edges = testing::path_graph(4);
    runtime::Cluster cluster({2});
    auto const graphs = testing::local_graphs(edges, 4, 2);
    std::vector<algo::LocalDeltas> deltas(2);
    deltas[0] = {{0, 0}, {1}};
    deltas[1] = {{0, 0}, {0}};
    auto const ok = algo::aggregate_deltas(cluster, graphs, deltas, ExchangeMode::sparse);
    CHECK(ok.delta == seq::PerVertexDelta{0, 0, 1, 0});
    deltas[0] = {{0}, {1}};
    CHECK_THROWS_AS(algo::aggregate_deltas(cluster, graphs, deltas, ExchangeMode::sparse), Error);
  }
}

TEST_CASE("filter shape and estimator arithmetic") {
  auto const shape = algo::filter_shape(1000, 0.01);
  auto const ln2 = std::log(2.0);
  auto const bits = static_cast<std::uint64_t>(std::ceil(-1000 * std::log(0.01) / (ln2 * ln2)));
  CHECK(shape.bits == bits);
  CHECK(shape.hashes == static_cast<std::uint32_t>(std::lround(static_cast<double>(bits) / 1000 * ln2)));
  CHECK(shape.hashes == 7);
  CHECK(shape.words() == (bits + 63) / 64);
  CHECK_THROWS_AS(algo::filter_shape(10, 0.0), Error);
  CHECK_THROWS_AS(algo::filter_shape(10, 1.0), Error);

  CHECK(algo::corrected_estimate(10, 100, 0.01) == doctest::Approx(9.0 / 0.99));
  CHECK(algo::corrected_estimate(0, 100, 0.01) == 0.0);
  CHECK(algo::corrected_estimate(100, 100, 0.5) == doctest::Approx(100.0));
  // E[C] = t + f (q - t) maps back to t.
  double const t = 40;
  double const q = 500;
  double const f = 0.02;
  CHECK(algo::corrected_estimate(t + f * (q - t), q, f) == doctest::Approx(t));
  CHECK(algo::filter_seed(1, 5) != algo::filter_seed(1, 6));
  CHECK(algo::filter_seed(1, 5) != algo::filter_seed(2, 5));
}

TEST_CASE("filters have no false negatives and a plausible false-positive rate") {
  std::mt19937_64 rng(3);
  std::vector<VertexId> members;
  std::set<VertexId> set;
  while (set.size() < 1000) set.insert(rng() % 1000000);
  members.assign(set.begin(), set.end());
  auto const filter = algo::NeighborhoodFilter::build(members, 0.01, 77);
  for (VertexId x : members) CHECK(filter.contains(x));
  CHECK(algo::amq_count(filter, members) == members.size());
  std::uint64_t fp = 0;
  std::uint64_t trials = 0;
  for (VertexId x = 2000000; x < 2100000; ++x) {
    ++trials;
    fp += filter.contains(x) ? 1 : 0;
  }
  double const rate = static_cast<double>(fp) / static_cast<double>(trials);
  CHECK(rate > 0.005);
  CHECK(rate < 0.02);
  CHECK(filter.realized_fpr() == doctest::Approx(0.01).epsilon(0.3));

  auto const copy = algo::NeighborhoodFilter::from_words(1000, 0.01, 77, filter.words());
  for (VertexId x = 2000000; x < 2001000; ++x) CHECK(copy.contains(x) == filter.contains(x));
  std::vector<Word> const short_words(1);
  CHECK_THROWS_AS(algo::NeighborhoodFilter::from_words(1000, 0.01, 77, short_words), Error);
}

TEST_CASE("approximate cut-graph phase") {
  VertexId const n = 300;
  auto const edges = io::gen_gnm(n, 6000, 9);
  auto const classes = seq::classify_triangles(edges, graph::Partition::balanced(n, 6));
  REQUIRE(classes.t3 > 50);
  for (auto a : {Algorithm::cetric, Algorithm::cetric2}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto options = testing::options_for(a);
      options.amq = algo::AmqOptions{0.05, seed};
      auto const r = testing::run_algorithm(edges, n, 6, options);
      CHECK(r.approximate);
      CHECK(r.local_phase == classes.t1 + classes.t2);
      CHECK(r.global_phase >= classes.t3);
      CHECK(r.total == r.local_phase + r.global_phase);
      REQUIRE(r.estimate_corrected.has_value());
      CHECK(*r.estimate_corrected >= static_cast<double>(r.local_phase));
      CHECK(*r.estimate_corrected <= static_cast<double>(r.total) + 1e-9);
    }
  }
  auto options = testing::options_for(Algorithm::ditric);
  options.amq = algo::AmqOptions{};
  try {
    (void)testing::run_algorithm(edges, n, 6, options);
    FAIL("expected parameter error");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::parameter);
  }
}

TEST_CASE("automatic thresholds respect the floor") {
  auto const edges = io::gen_gnm(200, 3000, 1);
  runtime::ClusterConfig config;
  config.num_pes = 4;
  runtime::Cluster cluster(config);
  auto const graphs = testing::local_graphs(edges, 200, 4);
  (void)algo::count_triangles(cluster, graphs, testing::options_for(Algorithm::cetric));
  for (PeId i = 0; i < 4; ++i) CHECK(cluster.threshold(i) >= runtime::kMinThreshold);

  config.threshold = 4;
  runtime::Cluster tight(config);
  auto const r = algo::count_triangles(tight, graphs, testing::options_for(Algorithm::ditric));
  CHECK(r.total == seq::brute_force(edges));
  CHECK(r.cost.max_threshold == 4);
  CHECK(r.cost.buffer_bound_violations == 0);
}
