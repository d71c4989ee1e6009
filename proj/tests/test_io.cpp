#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "tricount/io/generators.hpp"
#include "tricount/io/normalize.hpp"

using namespace tricount;

namespace {

auto is_simple(std::vector<Edge> const& edges, VertexId n) -> bool {
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (!(u < v) || v >= n || !seen.insert({u, v}).second) return false;
  }
  return true;
}

auto error_kind(auto&& f) -> std::optional<ErrorKind> {
  try {
    f();
  } catch (Error const& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("uniform draws") {
  std::mt19937_64 rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[io::uniform_below(rng, 7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    double const x = io::uniform_unit(rng);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(io::uniform_below(rng, 1) == 0);
}

TEST_CASE("gnm") {
  CHECK(io::gen_gnm(4, 6, 0) == testing::complete_graph(4));
  CHECK(io::gen_gnm(10, 0, 0).empty());
  CHECK(error_kind([] { (void)io::gen_gnm(4, 7, 0); }) == ErrorKind::parameter);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto const edges = io::gen_gnm(64, 512, seed);
    CHECK(edges.size() == 512);
    CHECK(is_simple(edges, 64));
    CHECK(std::is_sorted(edges.begin(), edges.end()));
  }
  CHECK(io::gen_gnm(64, 512, 3) == io::gen_gnm(64, 512, 3));
  CHECK(io::gen_gnm(64, 512, 3) != io::gen_gnm(64, 512, 4));

  // Every pair is equally likely.
  std::map<Edge, int> freq;
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    for (auto const& e : io::gen_gnm(6, 3, seed)) ++freq[e];
  }
  CHECK(freq.size() == 15);
  for (auto const& [e, f] : freq) CHECK(std::abs(f - 600) < 120);
}

TEST_CASE("rgg2d") {
  CHECK(io::gen_rgg2d(30, std::sqrt(2.0), 1) == testing::complete_graph(30));
  CHECK(io::gen_rgg2d(30, 0.0, 1).empty());
  CHECK(error_kind([] { (void)io::gen_rgg2d(30, 2.0, 1); }) == ErrorKind::parameter);
  CHECK(error_kind([] { (void)io::gen_rgg2d(30, -0.1, 1); }) == ErrorKind::parameter);

  VertexId const n = 4096;
  double const r = io::rgg_radius(n, 16.0);
  double const pairs = static_cast<double>(n) * (n - 1) / 2.0;
  CHECK(pairs * std::numbers::pi * r * r == doctest::Approx(16.0 * n));
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto const edges = io::gen_rgg2d(n, r, seed);
    CHECK(is_simple(edges, n));
    total += static_cast<double>(edges.size());
  }
  double const mean = total / 20.0;
  CHECK(mean > 0.85 * 16 * n);
  CHECK(mean < 1.15 * 16 * n);
}

TEST_CASE("rgg2d matches a pairwise distance check") {
  // Rebuild the points by regenerating with the complete radius and probing
  // structure: a larger radius only adds edges.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto const small = io::gen_rgg2d(300, 0.05, seed);
    auto const large = io::gen_rgg2d(300, 0.1, seed);
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    CHECK(large.size() > small.size());
  }
}

TEST_CASE("rmat") {
  io::RmatProbabilities const corner{1.0, 0.0, 0.0, 0.0};
  CHECK(io::gen_rmat(8, 4, corner, 1).empty());
  io::RmatProbabilities const last{0.0, 0.0, 0.0, 1.0};
  CHECK(io::gen_rmat(8, 4, last, 1).empty());
  io::RmatProbabilities const off{0.0, 1.0, 0.0, 0.0};
  // Always the b quadrant: the single pair (0, 2^scale - 1).
  CHECK(io::gen_rmat(5, 4, off, 1) == std::vector<Edge>{{0, 31}});
  CHECK(error_kind([] { (void)io::gen_rmat(4, 4, {0.5, 0.5, 0.5, 0.5}, 1); }) == ErrorKind::parameter);

  auto const edges = io::gen_rmat(12, 16, {}, 7);
  CHECK(is_simple(edges, 4096));
  std::vector<std::size_t> degree(4096, 0);
  for (auto [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  double const mean = 2.0 * static_cast<double>(edges.size()) / 4096.0;
  auto const max = *std::max_element(degree.begin(), degree.end());
  CHECK(static_cast<double>(max) > 10 * mean);
  CHECK(io::gen_rmat(12, 16, {}, 7) == edges);
}

TEST_CASE("generator specs") {
  auto const s = io::parse_generator_spec("family=gnm,n=65536,m=1048576,seed=42");
  CHECK(s.family == io::Family::gnm);
  CHECK(s.n == 65536);
  CHECK(s.m == 1048576);
  CHECK(s.seed == 42);
  auto const r = io::parse_generator_spec("family=rgg2d,n=100,ef=4.5,r=0.2");
  CHECK(r.edgefactor == 4.5);
  CHECK(r.radius == 0.2);
  auto const m = io::parse_generator_spec("family=rmat,scale=10,a=0.6,b=0.2,c=0.15,d=0.05");
  CHECK(m.scale == 10);
  CHECK(m.n == 1024);
  CHECK(m.probabilities.a == 0.6);
  CHECK(io::parse_generator_spec("family=rmat,n=256").scale == 8);

  for (auto const* text : {"family=gnm,n=65536,m=1048576,seed=42", "family=rgg2d,n=100,ef=4.5,r=0.2,seed=3",
                           "family=rmat,scale=10,a=0.6,b=0.2,c=0.15,d=0.05"}) {
    auto const parsed = io::parse_generator_spec(text);
    auto const again = io::parse_generator_spec(io::to_string(parsed));
    CHECK(io::generate(parsed) == io::generate(again));
  }

  for (auto const* bad : {"", "family=foo,n=3", "family=gnm", "family=gnm,n=x", "family=gnm,n=4,zz=1",
                          "family=rmat,n=100", "family=gnm,n=4,m", "n=4"}) {
    CAPTURE(bad);
    CHECK(error_kind([&] { (void)io::parse_generator_spec(bad); }) == ErrorKind::parameter);
  }
}

TEST_CASE("simplify and normalize") {
  std::vector<Edge> const raw{{5, 3}, {3, 5}, {7, 7}, {10, 3}, {3, 10}};
  CHECK(io::simplify(raw) == std::vector<Edge>{{3, 5}, {3, 10}});
  auto const g = io::normalize(raw);
  CHECK(g.n == 3);
  CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 2}});
  CHECK(g.original_id == std::vector<VertexId>{3, 5, 10});
  std::ostringstream remap;
  io::write_remap(remap, g);
  CHECK(remap.str() == "# new old\n0 3\n1 5\n2 10\n");
  CHECK(io::normalize({}).n == 0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (int i = 0; i < 200; ++i) edges.emplace_back(rng() % 1000, rng() % 1000);
    auto const ng = io::normalize(edges);
    CHECK(is_simple(ng.edges, ng.n));
    CHECK(std::is_sorted(ng.original_id.begin(), ng.original_id.end()));
    std::set<Edge> back;
    for (auto [u, v] : ng.edges) back.insert({ng.original_id[u], ng.original_id[v]});
    auto const simple = io::simplify(edges);
    CHECK(back == std::set<Edge>(simple.begin(), simple.end()));
  }
}

TEST_CASE("edge list reading and writing") {
  std::istringstream ok("# header\n0 1\n\n  2 3  \n1\t2\n");
  CHECK(io::read_edge_list(ok) == std::vector<Edge>{{0, 1}, {2, 3}, {1, 2}});

  std::istringstream bad("0 1\n2 x\n");
  try {
    (void)io::read_edge_list(bad);
    FAIL("expected parse error");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  for (auto const* text : {"1\n", "1 2 3\n", "-1 2\n", "99999999999999999999 1\n"}) {
    std::istringstream in(text);
    CAPTURE(text);
    CHECK(error_kind([&] { (void)io::read_edge_list(in); }) == ErrorKind::parse);
  }
  CHECK(error_kind([] { (void)io::read_edge_list(std::string("/nonexistent/edges.txt")); }) == ErrorKind::io);

  auto const edges = io::gen_gnm(50, 100, 2);
  auto const path = std::filesystem::temp_directory_path() / "tricount_io_test.txt";
  {
    std::ofstream out(path);
    io::write_edge_list(out, edges);
  }
  CHECK(io::read_edge_list(path.string()) == edges);
  std::filesystem::remove(path);
}

TEST_CASE("partition and distribution") {
  auto const part = io::partition_contiguous(10, 4);
  CHECK(std::vector<VertexId>(part.boundaries().begin(), part.boundaries().end()) ==
        std::vector<VertexId>{0, 3, 6, 8, 10});
  CHECK(error_kind([] { (void)io::partition_contiguous(3, 0); }) == ErrorKind::parameter);
  CHECK(error_kind([] { (void)io::partition_contiguous(3, 4); }) == ErrorKind::parameter);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto const edges = io::gen_gnm(40, 150, seed);
    auto const pt = io::partition_contiguous(40, 1 + seed % 7);
    auto const per_pe = io::distribute(edges, pt);
    std::map<Edge, int> copies;
    for (PeId i = 0; i < per_pe.size(); ++i) {
      for (auto [u, v] : per_pe[i]) {
        CHECK((pt.rank_of(u) == i || pt.rank_of(v) == i));
        ++copies[{u, v}];
      }
    }
    CHECK(copies.size() == edges.size());
    for (auto const& [e, c] : copies) CHECK(c == (pt.rank_of(e.first) == pt.rank_of(e.second) ? 1 : 2));
  }
}

TEST_CASE("generators are deterministic per seed") {
  for (auto const* text : {"family=gnm,n=500,m=2000", "family=rgg2d,n=500,ef=4", "family=rmat,scale=9,ef=4"}) {
    auto spec = io::parse_generator_spec(text);
    spec.seed = 11;
    auto const a = io::generate(spec);
    auto const b = io::generate(spec);
    CHECK(a == b);
    spec.seed = 12;
    CHECK(io::generate(spec) != a);
  }
}
