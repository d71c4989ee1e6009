#include "tricount/app/run.hpp"

#include <chrono>
#include <fstream>
#include <string>

#include "tricount/algo/triangle_count.hpp"
#include "tricount/graph/local_graph.hpp"
#include "tricount/graph/oriented_graph.hpp"
#include "tricount/io/generators.hpp"
#include "tricount/io/normalize.hpp"
#include "tricount/seq/sequential.hpp"

namespace tricount::app {

namespace {

using Clock = std::chrono::steady_clock;

auto seconds_since(Clock::time_point start) -> double {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

auto load_edges(RunConfig const& config, RunHooks const& hooks) -> std::vector<Edge> {
  if (hooks.load) {
    return hooks.load(config);
  }
  if (config.input) {
    return io::read_edge_list(*config.input);
  }
  io::GeneratorSpec spec = io::parse_generator_spec(*config.generator);
  if (config.generator->find("seed=") == std::string::npos) {
    spec.seed = config.seed;
  }
  return io::generate(spec);
}

void dump_lcc(std::string const& path, io::NormalizedGraph const& g, seq::PerVertexDelta const& delta,
              std::vector<double> const& lcc) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorKind::io, "cannot write '" + path + "'");
  }
  out << "# vertex delta lcc\n";
  out.precision(17);
  for (VertexId v = 0; v < g.n; ++v) {
    out << g.original_id[v] << ' ' << delta[v] << ' ' << lcc[v] << '\n';
  }
  if (!out) {
    fail(ErrorKind::io, "write to '" + path + "' failed");
  }
}

auto run_sequential(RunConfig const& config, io::NormalizedGraph const& g) -> RunReport {
  RunReport report;
  report.config = config;
  report.n = g.n;
  report.m = g.edges.size();
  auto const start = Clock::now();
  auto const oriented = graph::orient_whole_graph(g.edges, g.n);
  seq::PerVertexDelta delta;
  seq::TriangleCallback on_triangle;
  if (config.lcc) {
    delta.assign(g.n, 0);
    on_triangle = [&](VertexId a, VertexId b, VertexId c) {
      ++delta[a];
      ++delta[b];
      ++delta[c];
    };
  }
  report.triangles = seq::edge_iterator(oriented, on_triangle);
  report.local_phase = report.triangles;
  report.total_seconds = seconds_since(start);
  report.phases.push_back({"counting", report.total_seconds, 0, 0, 0, 0.0});
  if (config.lcc && config.lcc_out) {
    std::vector<Degree> degree(g.n, 0);
    for (auto const& [u, v] : g.edges) {
      ++degree[u];
      ++degree[v];
    }
    std::vector<double> lcc(g.n);
    for (VertexId v = 0; v < g.n; ++v) lcc[v] = seq::lcc(delta[v], degree[v]);
    dump_lcc(*config.lcc_out, g, delta, lcc);
  }
  return report;
}

auto run_distributed(RunConfig const& config, io::NormalizedGraph const& g) -> RunReport {
  RunReport report;
  report.config = config;
  report.n = g.n;
  report.m = g.edges.size();

  auto const part = io::partition_contiguous(g.n, config.pes);
  auto const per_pe = io::distribute(g.edges, part);
  std::vector<graph::LocalGraph> graphs;
  graphs.reserve(config.pes);
  for (PeId i = 0; i < config.pes; ++i) {
    graphs.push_back(graph::LocalGraph::build(per_pe[i], part, i));
  }

  runtime::ClusterConfig cluster_config;
  cluster_config.num_pes = config.pes;
  cluster_config.cost = {config.alpha, config.beta};
  if (config.delta) cluster_config.threshold = *config.delta;
  cluster_config.scheduler = config.scheduler;
  runtime::Cluster cluster(cluster_config);

  algo::AlgoOptions options;
  options.algorithm = *algo::parse_algorithm(config.algorithm);
  options.exchange = config.exchange;
  options.compute_lcc = config.lcc;
  if (config.approx) {
    options.amq = algo::AmqOptions{config.fpr, config.seed};
  }

  // Ingestion is done; everything from here on is timed.
  auto const start = Clock::now();
  auto const result = algo::count_triangles(cluster, graphs, options);
  report.total_seconds = seconds_since(start);

  report.triangles = result.total;
  report.local_phase = result.local_phase;
  report.global_phase = result.global_phase;
  report.approximate = result.approximate;
  report.estimate_corrected = result.estimate_corrected;
  for (auto const& phase : result.phases) {
    report.phases.push_back({phase.name, phase.wall_seconds, phase.cost.max_messages_sent(),
                             phase.cost.max_words_sent(), phase.cost.total_words(), phase.cost.modeled_time()});
  }
  auto const& cost = result.cost;
  report.max_messages_sent = cost.max_messages_sent();
  report.max_messages_received = cost.max_messages_received();
  report.max_words_sent = cost.max_words_sent();
  report.max_words_received = cost.max_words_received();
  report.total_messages = cost.total_messages();
  report.total_words = cost.total_words();
  report.max_neighborhood_words = cost.max_tag_words_sent(runtime::Tag::neighborhood);
  report.modeled_time = cost.modeled_time();
  report.max_buffered_words = cost.max_buffered_words;
  report.max_record_words = cost.max_record_words;
  report.buffer_bound_violations = cost.buffer_bound_violations;

  if (config.lcc && config.lcc_out && result.delta && result.lcc) {
    dump_lcc(*config.lcc_out, g, *result.delta, *result.lcc);
  }
  return report;
}

void strip_timing(RunReport& report) {
  report.total_seconds = 0.0;
  for (auto& phase : report.phases) phase.wall_seconds = 0.0;
}

}  // namespace

void validate(RunConfig const& config) {
  bool const sequential = config.algorithm == "seq";
  auto const algorithm = algo::parse_algorithm(config.algorithm);
  if (!sequential && !algorithm) {
    fail(ErrorKind::parameter, "unknown algorithm '" + config.algorithm + "'");
  }
  if (config.pes < 1) {
    fail(ErrorKind::parameter, "need at least one PE");
  }
  if (config.input.has_value() == config.generator.has_value()) {
    fail(ErrorKind::parameter, "give exactly one of an input file and a generator spec");
  }
  if (config.approx && (sequential || !algo::is_cetric(*algorithm))) {
    fail(ErrorKind::parameter, "approximate counting needs cetric or cetric2");
  }
  if (config.approx && !(config.fpr > 0.0 && config.fpr < 1.0)) {
    fail(ErrorKind::parameter, "false-positive rate must lie in (0, 1)");
  }
  if (config.delta && *config.delta == 0) {
    fail(ErrorKind::parameter, "delta must be positive");
  }
  if (!(config.alpha >= 0.0) || !(config.beta >= 0.0)) {
    fail(ErrorKind::parameter, "alpha and beta must be non-negative");
  }
  if (config.lcc_out && !config.lcc) {
    fail(ErrorKind::parameter, "an LCC output path needs --lcc");
  }
}

auto run_sweep(RunConfig const& config, std::vector<PeId> const& pes, RunHooks const& hooks)
    -> std::vector<RunReport> {
  validate(config);
  auto const graph = io::normalize(load_edges(config, hooks));
  std::vector<RunReport> reports;
  for (PeId p : pes) {
    RunConfig current = config;
    current.pes = p;
    validate(current);
    RunReport report = current.algorithm == "seq" ? run_sequential(current, graph) : run_distributed(current, graph);
    if (!current.timing) strip_timing(report);
    reports.push_back(std::move(report));
  }
  return reports;
}

auto run(RunConfig const& config, RunHooks const& hooks) -> RunReport {
  return std::move(run_sweep(config, {config.pes}, hooks).front());
}

auto exit_code(ErrorKind kind) -> int {
  switch (kind) {
    case ErrorKind::parameter:
      return 2;
    case ErrorKind::io:
      return 3;
    case ErrorKind::parse:
      return 4;
    case ErrorKind::livelock:
      return 5;
    case ErrorKind::size:
      return 6;
    default:
      return 7;
  }
}

}  // namespace tricount::app
