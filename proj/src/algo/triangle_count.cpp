#include "tricount/algo/triangle_count.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <mutex>
#include <string>
#include <utility>

#include "tricount/algo/amq.hpp"
#include "tricount/algo/surrogate.hpp"
#include "tricount/runtime/collectives.hpp"
#include "tricount/seq/intersect.hpp"

namespace tricount::algo {

using graph::DegreeOrderKey;
using graph::OrientedGraph;
using runtime::Cluster;
using runtime::CostReport;
using runtime::PeContext;
using runtime::Progress;
using runtime::RecordView;
using runtime::StepFn;
using runtime::Tag;

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 4> kNames{{
    {Algorithm::ditric, "ditric"},
    {Algorithm::ditric2, "ditric2"},
    {Algorithm::cetric, "cetric"},
    {Algorithm::cetric2, "cetric2"},
}};

struct PeState {
  OrientedGraph oriented;  // plain for DITRIC, expanded for CETRIC
  OrientedGraph contracted;
  LocalDeltas deltas;
  SurrogateState surrogate;
  std::uint64_t t_local = 0;
  std::uint64_t t_global = 0;
  double amq_estimate = 0.0;
  std::uint64_t amq_queries = 0;
  std::vector<DegreeOrderKey> received;
  std::vector<VertexId> ids;
  std::vector<PeId> owners;
  std::vector<Word> payload;
};

/// Side effects of a found triangle: Δ bookkeeping and the user hook.
class TriangleSink {
 public:
  explicit TriangleSink(AlgoOptions const& options) : track_delta_(options.compute_lcc), hook_(options.on_triangle) {}

  [[nodiscard]] auto enumerates() const -> bool { return track_delta_ || static_cast<bool>(hook_); }

  void operator()(PeState& s, VertexId a, VertexId b, VertexId c) {
    if (track_delta_) {
      bump(s, a);
      bump(s, b);
      bump(s, c);
    }
    if (hook_) {
      std::lock_guard const lock(mutex_);
      hook_(a, b, c);
    }
  }

 private:
  static void bump(PeState& s, VertexId v) {
    auto const& dir = s.oriented.directory();
    if (dir.is_local(v)) {
      s.deltas.local[v - dir.first()] += 1;
    } else if (auto const idx = dir.ghosts().index_of(v)) {
      s.deltas.ghost[*idx] += 1;
    } else {
      fail(ErrorKind::protocol, "triangle on unknown vertex " + std::to_string(v));
    }
  }

  bool track_delta_;
  seq::TriangleCallback const& hook_;
  std::mutex mutex_;
};

/// Collects cost, traces and wall time of one named phase.
class PhaseLog {
 public:
  PhaseLog(Cluster& cluster, TriangleResult& result, std::string name)
      : cluster_(cluster), result_(result), start_(std::chrono::steady_clock::now()) {
    report_.name = std::move(name);
    report_.cost = CostReport(cluster.config().cost, cluster.num_pes());
  }
  PhaseLog(PhaseLog const&) = delete;
  auto operator=(PhaseLog const&) -> PhaseLog& = delete;

  /// Adds a run that went through the cluster, including its trace.
  void add_run(CostReport const& cost) {
    report_.cost += cost;
    auto const& trace = cluster_.last_trace();
    auto append = [](auto& dst, auto const& src) { dst.insert(dst.end(), src.begin(), src.end()); };
    append(report_.trace.posted, trace.posted);
    append(report_.trace.delivered, trace.delivered);
    append(report_.trace.hops, trace.hops);
  }
  void add_cost(CostReport const& cost) { report_.cost += cost; }

  void finish() {
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    result_.cost += report_.cost;
    result_.phases.push_back(std::move(report_));
  }

 private:
  Cluster& cluster_;
  TriangleResult& result_;
  PhaseReport report_;
  std::chrono::steady_clock::time_point start_;
};

/// Runs `work(pe)` once on every PE's executor. No communication.
template <typename F>
auto run_local(Cluster& cluster, F&& work) -> CostReport {
  return cluster.run_until_quiescent([&](PeContext&) -> StepFn {
    return [&](PeContext& ctx) {
      work(ctx.rank());
      return Progress::done;
    };
  });
}

void check_inputs(Cluster const& cluster, std::span<graph::LocalGraph const> graphs) {
  if (graphs.size() != cluster.num_pes()) {
    fail(ErrorKind::parameter, "need one local graph per PE: " + std::to_string(graphs.size()) + " graphs, " +
                                   std::to_string(cluster.num_pes()) + " PEs");
  }
  for (PeId i = 0; i < graphs.size(); ++i) {
    if (graphs[i].pe() != i || graphs[i].partition().num_pes() != cluster.num_pes()) {
      fail(ErrorKind::parameter, "local graph " + std::to_string(i) + " belongs to a different layout");
    }
  }
}

void prepare(Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions const& options) {
  check_inputs(cluster, graphs);
  if (options.auto_threshold) {
    for (PeId i = 0; i < cluster.num_pes(); ++i) {
      cluster.set_threshold(i, std::max(graphs[i].num_adjacency_entries(), runtime::kMinThreshold));
    }
  }
}

/// Degree exchange, orientation and (for CETRIC) expansion.
auto preprocess(Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions const& options,
                TriangleResult& result, bool expand) -> std::vector<PeState> {
  runtime::RunOptions const run{uses_indirection(options.algorithm)};
  std::vector<PeState> states(cluster.num_pes());
  PhaseLog log(cluster, result, "preprocessing");
  auto exchanged = exchange_ghost_degrees(cluster, graphs, options.exchange, run);
  if (options.exchange == ExchangeMode::sparse) {
    log.add_run(exchanged.cost);
  } else {
    log.add_cost(exchanged.cost);
  }
  log.add_run(run_local(cluster, [&](PeId i) {
    PeState& s = states[i];
    s.oriented = graph::orient_and_sort(graphs[i], exchanged.ghost_degrees[i]);
    if (expand) {
      s.oriented = graph::expand_ghost_adjacency(s.oriented);
    }
    if (options.compute_lcc) {
      s.deltas.local.assign(graphs[i].num_local(), 0);
      s.deltas.ghost.assign(graphs[i].ghosts().size(), 0);
    }
  }));
  log.finish();
  return states;
}

/// Receiver side of an exact neighborhood record: |A(v) ∩ A(u)| for every
/// local u in A(v), with A(u) taken from `rows`.
void intersect_received(PeState& s, OrientedGraph const& rows, RecordView const& record, TriangleSink& sink) {
  auto const& dir = s.oriented.directory();
  VertexId const v = decode_neighborhood(record.payload, dir, s.received);
  std::span<DegreeOrderKey const> const a_v = s.received;
  for (auto const& u : a_v) {
    if (!dir.is_local(u.id)) continue;
    auto const a_u = rows.out_of(u.id);
    if (sink.enumerates()) {
      s.t_global += seq::intersect_for_each(a_v, a_u, [&](DegreeOrderKey const& w) { sink(s, v, u.id, w.id); });
    } else {
      s.t_global += seq::intersect_count(a_v, a_u);
    }
  }
}

/// Sends A(v) of every local row of `rows` to each distinct owner of a ghost
/// member, once per (v, owner).
void send_neighborhoods(PeContext& ctx, PeState& s, OrientedGraph const& rows) {
  auto const& dir = s.oriented.directory();
  for (std::size_t row = 0; row < rows.num_local(); ++row) {
    auto const a_v = rows.out(row);
    if (a_v.empty()) continue;
    ghost_owners(a_v, dir, s.owners);
    if (s.owners.empty()) continue;
    VertexId const v = rows.row_vertex(row);
    encode_neighborhood(v, a_v, s.payload);
    for (PeId dst : s.owners) {
      if (s.surrogate.should_send(v, dst)) {
        ctx.post(dst, Tag::neighborhood, s.payload);
      }
    }
  }
}

auto finish_result(Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions const& options,
                   std::vector<PeState>& states, TriangleResult& result) {
  std::vector<std::uint64_t> local(states.size());
  std::vector<std::uint64_t> global(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    local[i] = states[i].t_local;
    global[i] = states[i].t_global;
  }
  result.local_phase = runtime::allreduce_sum(cluster, local);
  result.global_phase = runtime::allreduce_sum(cluster, global);
  result.total = result.local_phase + result.global_phase;
  if (options.compute_lcc) {
    PhaseLog log(cluster, result, "aggregation");
    std::vector<LocalDeltas> deltas;
    deltas.reserve(states.size());
    for (auto& s : states) deltas.push_back(std::move(s.deltas));
    auto aggregated =
        aggregate_deltas(cluster, graphs, deltas, options.exchange, {uses_indirection(options.algorithm)});
    if (options.exchange == ExchangeMode::sparse) {
      log.add_run(aggregated.cost);
    } else {
      log.add_cost(aggregated.cost);
    }
    log.finish();
    result.delta = std::move(aggregated.delta);
    result.lcc = std::move(aggregated.lcc);
  }
}

}  // namespace

auto algorithm_name(Algorithm a) -> std::string_view {
  for (auto const& [alg, name] : kNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

auto parse_algorithm(std::string_view name) -> std::optional<Algorithm> {
  for (auto const& [alg, n] : kNames) {
    if (n == name) return alg;
  }
  return std::nullopt;
}

auto uses_indirection(Algorithm a) -> bool { return a == Algorithm::ditric2 || a == Algorithm::cetric2; }
auto is_cetric(Algorithm a) -> bool { return a == Algorithm::cetric || a == Algorithm::cetric2; }

auto TriangleResult::phase(std::string_view name) const -> PhaseReport const* {
  auto const it = std::find_if(phases.begin(), phases.end(), [&](PhaseReport const& p) { return p.name == name; });
  return it == phases.end() ? nullptr : &*it;
}

void encode_neighborhood(VertexId v, std::span<DegreeOrderKey const> members, std::vector<Word>& out) {
  out.clear();
  out.reserve(members.size() + 2);
  out.push_back(v);
  out.push_back(members.size());
  for (auto const& key : members) out.push_back(key.id);
}

auto decode_neighborhood(std::span<Word const> payload, graph::DegreeDirectory const& dir,
                         std::vector<DegreeOrderKey>& out) -> VertexId {
  if (payload.size() < 2 || payload[1] != payload.size() - 2) {
    fail(ErrorKind::protocol, "malformed neighborhood record");
  }
  out.clear();
  for (Word id : payload.subspan(2)) {
    if (auto const key = dir.key_of(id)) {
      out.push_back(*key);
    }
  }
  return payload[0];
}

auto count_triangles(Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions const& options)
    -> TriangleResult {
  return is_cetric(options.algorithm) ? cetric_run(cluster, graphs, options) : ditric_run(cluster, graphs, options);
}

auto ditric_run(Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions options) -> TriangleResult {
  if (options.amq) {
    fail(ErrorKind::parameter, "approximate counting is only available for cetric variants");
  }
  prepare(cluster, graphs, options);
  TriangleResult result;
  result.cost = CostReport(cluster.config().cost, cluster.num_pes());
  auto states = preprocess(cluster, graphs, options, result, false);
  TriangleSink sink(options);

  PhaseLog log(cluster, result, "counting");
  log.add_run(cluster.run_until_quiescent(
      [&](PeContext& ctx) -> StepFn {
        PeState& s = states[ctx.rank()];
        ctx.on(Tag::neighborhood, [&](PeContext&, RecordView const& r) { intersect_received(s, s.oriented, r, sink); });
        return [&](PeContext& self) {
          OrientedGraph const& g = s.oriented;
          for (std::size_t row = 0; row < g.num_local(); ++row) {
            VertexId const v = g.row_vertex(row);
            auto const a_v = g.out(row);
            for (auto const& u : a_v) {
              if (!g.is_local(u.id)) continue;
              auto const a_u = g.out_of(u.id);
              if (sink.enumerates()) {
                s.t_local +=
                    seq::intersect_for_each(a_v, a_u, [&](DegreeOrderKey const& w) { sink(s, v, u.id, w.id); });
              } else {
                s.t_local += seq::intersect_count(a_v, a_u);
              }
            }
          }
          send_neighborhoods(self, s, g);
          return Progress::done;
        };
      },
      {uses_indirection(options.algorithm)}));
  log.finish();

  finish_result(cluster, graphs, options, states, result);
  return result;
}

auto cetric_run(Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions options) -> TriangleResult {
  prepare(cluster, graphs, options);
  TriangleResult result;
  result.cost = CostReport(cluster.config().cost, cluster.num_pes());
  auto states = preprocess(cluster, graphs, options, result, true);
  TriangleSink sink(options);

  {
    PhaseLog log(cluster, result, "local_phase");
    log.add_run(run_local(cluster, [&](PeId i) {
      PeState& s = states[i];
      seq::TriangleCallback on_triangle;
      if (sink.enumerates()) {
        on_triangle = [&](VertexId a, VertexId b, VertexId c) { sink(s, a, b, c); };
      }
      s.t_local = seq::edge_iterator(s.oriented, on_triangle);
    }));
    log.finish();
  }
  {
    PhaseLog log(cluster, result, "contraction");
    log.add_run(run_local(cluster, [&](PeId i) { states[i].contracted = graph::contract_to_cut(states[i].oriented); }));
    log.finish();
  }

  runtime::RunOptions const run{uses_indirection(options.algorithm)};
  PhaseLog log(cluster, result, "global_phase");
  if (!options.amq) {
    log.add_run(cluster.run_until_quiescent(
        [&](PeContext& ctx) -> StepFn {
          PeState& s = states[ctx.rank()];
          ctx.on(Tag::neighborhood,
                 [&](PeContext&, RecordView const& r) { intersect_received(s, s.contracted, r, sink); });
          return [&](PeContext& self) {
            send_neighborhoods(self, s, s.contracted);
            return Progress::done;
          };
        },
        run));
  } else {
    AmqOptions const amq = *options.amq;
    (void)filter_shape(1, amq.fpr);  // validates the rate before any traffic
    log.add_run(cluster.run_until_quiescent(
        [&](PeContext& ctx) -> StepFn {
          PeState& s = states[ctx.rank()];
          ctx.on(Tag::amq, [&](PeContext&, RecordView const& r) {
            if (r.payload.size() < 2) fail(ErrorKind::protocol, "malformed filter record");
            VertexId const v = r.payload[0];
            std::uint64_t const q_src = r.payload[1];
            auto const filter =
                NeighborhoodFilter::from_words(q_src, amq.fpr, filter_seed(amq.seed, v), r.payload.subspan(2));
            std::uint64_t positives = 0;
            std::uint64_t queries = 0;
            // Local u with v < u adjacent to v: the expanded ghost row of v.
            for (auto const& u : s.oriented.out_of(v)) {
              for (auto const& w : s.contracted.out_of(u.id)) {
                ++queries;
                if (filter.contains(w.id)) {
                  ++positives;
                  if (sink.enumerates()) sink(s, v, u.id, w.id);
                }
              }
            }
            double const f_v = filter.realized_fpr();
            auto const c = static_cast<double>(positives);
            auto const q = static_cast<double>(queries);
            s.t_global += positives;
            s.amq_queries += queries;
            s.amq_estimate += f_v < 1.0 ? (c - f_v * q) / (1.0 - f_v) : c;
          });
          return [&](PeContext& self) {
            auto const& dir = s.oriented.directory();
            OrientedGraph const& g = s.contracted;
            for (std::size_t row = 0; row < g.num_local(); ++row) {
              auto const a_v = g.out(row);
              if (a_v.empty()) continue;
              ghost_owners(a_v, dir, s.owners);
              VertexId const v = g.row_vertex(row);
              s.ids.clear();
              for (auto const& key : a_v) s.ids.push_back(key.id);
              auto const filter = NeighborhoodFilter::build(s.ids, amq.fpr, filter_seed(amq.seed, v));
              s.payload.clear();
              s.payload.push_back(v);
              s.payload.push_back(s.ids.size());
              s.payload.insert(s.payload.end(), filter.words().begin(), filter.words().end());
              for (PeId dst : s.owners) {
                if (s.surrogate.should_send(v, dst)) {
                  self.post(dst, Tag::amq, s.payload);
                }
              }
            }
            return Progress::done;
          };
        },
        run));
  }
  log.finish();

  double estimate = 0.0;
  double queries = 0.0;
  for (auto const& s : states) {
    estimate += s.amq_estimate;
    queries += static_cast<double>(s.amq_queries);
  }
  finish_result(cluster, graphs, options, states, result);
  if (options.amq) {
    result.approximate = true;
    result.estimate_corrected = static_cast<double>(result.local_phase) + std::clamp(estimate, 0.0, queries);
  }
  return result;
}

auto aggregate_deltas(Cluster& cluster, std::span<graph::LocalGraph const> graphs,
                      std::span<LocalDeltas const> deltas, ExchangeMode mode, runtime::RunOptions options)
    -> DeltaAggregation {
  PeId const p = cluster.num_pes();
  check_inputs(cluster, graphs);
  if (deltas.size() != p) {
    fail(ErrorKind::collective, "delta aggregation needs one entry per PE");
  }
  std::vector<runtime::PeerPayloads> outgoing(p);
  for (PeId i = 0; i < p; ++i) {
    auto const& ghosts = graphs[i].ghosts();
    if (deltas[i].local.size() != graphs[i].num_local() || deltas[i].ghost.size() != ghosts.size()) {
      fail(ErrorKind::parameter, "delta vectors do not match local graph " + std::to_string(i));
    }
    std::vector<std::vector<Word>> per_dst(p);
    for (std::size_t g = 0; g < ghosts.size(); ++g) {
      if (deltas[i].ghost[g] == 0) continue;
      auto& payload = per_dst[ghosts.owner(g)];
      payload.push_back(ghosts.ids()[g]);
      payload.push_back(deltas[i].ghost[g]);
    }
    for (PeId dst = 0; dst < p; ++dst) {
      if (!per_dst[dst].empty()) outgoing[i].emplace_back(dst, std::move(per_dst[dst]));
    }
  }
  auto exchanged = mode == ExchangeMode::sparse ? runtime::sparse_all_to_all(cluster, Tag::delta, outgoing, options)
                                                : runtime::dense_all_to_all(cluster, Tag::delta, outgoing);

  DeltaAggregation result;
  result.cost = std::move(exchanged.cost);
  VertexId const n = graphs.empty() ? 0 : graphs[0].partition().num_vertices();
  result.delta.assign(n, 0);
  result.lcc.assign(n, 0.0);
  for (PeId i = 0; i < p; ++i) {
    graph::LocalGraph const& g = graphs[i];
    for (std::size_t k = 0; k < g.num_local(); ++k) {
      result.delta[g.first() + k] = deltas[i].local[k];
    }
    for (auto const& [src, words] : exchanged.received[i]) {
      if (words.size() % 2 != 0) fail(ErrorKind::protocol, "malformed delta payload");
      for (std::size_t k = 0; k < words.size(); k += 2) {
        if (!g.is_local(words[k])) {
          fail(ErrorKind::protocol, "PE " + std::to_string(i) + " received Δ for vertex " +
                                        std::to_string(words[k]) + " it does not own");
        }
        result.delta[words[k]] += words[k + 1];
      }
    }
    for (VertexId v = g.first(); v < g.last(); ++v) {
      result.lcc[v] = seq::lcc(result.delta[v], g.local_degree(v));
    }
  }
  return result;
}

}  // namespace tricount::algo
