#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tricount/algo/degree_exchange.hpp"
#include "tricount/graph/local_graph.hpp"
#include "tricount/runtime/cluster.hpp"
#include "tricount/seq/sequential.hpp"

namespace tricount::algo {

enum class Algorithm { ditric, ditric2, cetric, cetric2 };

auto algorithm_name(Algorithm a) -> std::string_view;
auto parse_algorithm(std::string_view name) -> std::optional<Algorithm>;
/// The "2" variants route every message through the PE grid.
auto uses_indirection(Algorithm a) -> bool;
auto is_cetric(Algorithm a) -> bool;

struct AmqOptions {
  double fpr = 0.01;
  std::uint64_t seed = 0;
};

struct AlgoOptions {
  Algorithm algorithm = Algorithm::cetric;
  ExchangeMode exchange = ExchangeMode::sparse;
  /// Aggregate Δ(v) and LCC(v) at the owners.
  bool compute_lcc = false;
  /// CETRIC only: replace exact type-3 intersections by Bloom filter queries.
  std::optional<AmqOptions> amq;
  /// Called once per triangle found, as (lowest, middle, highest) in degree
  /// order. Calls are serialized. In approximate mode it also sees the
  /// positives of the filter queries.
  seq::TriangleCallback on_triangle;
  /// Size each PE's δ from its local input (max(|E_i|, 2^14)); a threshold
  /// fixed in the cluster config always wins.
  bool auto_threshold = true;
};

struct PhaseReport {
  std::string name;
  runtime::CostReport cost;
  double wall_seconds = 0.0;
  /// Concatenated traces of the runs in this phase (if tracing is enabled).
  runtime::Trace trace;
};

struct TriangleResult {
  /// Exact count; in approximate mode local phase plus uncorrected positives.
  std::uint64_t total = 0;
  std::uint64_t local_phase = 0;
  std::uint64_t global_phase = 0;
  bool approximate = false;
  /// Approximate mode: local phase plus the corrected global estimate.
  std::optional<double> estimate_corrected;
  /// Indexed by global vertex id.
  std::optional<seq::PerVertexDelta> delta;
  std::optional<std::vector<double>> lcc;
  std::vector<PhaseReport> phases;
  runtime::CostReport cost;

  [[nodiscard]] auto phase(std::string_view name) const -> PhaseReport const*;
};

/// Runs the selected algorithm on a cluster whose PE i holds graphs[i].
auto count_triangles(runtime::Cluster& cluster, std::span<graph::LocalGraph const> graphs,
                     AlgoOptions const& options) -> TriangleResult;

auto ditric_run(runtime::Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions options)
    -> TriangleResult;
auto cetric_run(runtime::Cluster& cluster, std::span<graph::LocalGraph const> graphs, AlgoOptions options)
    -> TriangleResult;

/// Δ counts one PE holds for its local vertices and for copies of its ghosts.
struct LocalDeltas {
  std::vector<std::uint64_t> local;
  std::vector<std::uint64_t> ghost;  ///< indexed like the ghost table
};

struct DeltaAggregation {
  seq::PerVertexDelta delta;
  std::vector<double> lcc;
  runtime::CostReport cost;
};

/// Ships ghost Δ to the owners, sums there and derives LCC from the owners'
/// true degrees. Results are gathered into global vectors.
auto aggregate_deltas(runtime::Cluster& cluster, std::span<graph::LocalGraph const> graphs,
                      std::span<LocalDeltas const> deltas, ExchangeMode mode, runtime::RunOptions options = {})
    -> DeltaAggregation;

/// Payload [v, |A(v)|, members...] of a neighborhood record.
void encode_neighborhood(VertexId v, std::span<graph::DegreeOrderKey const> members, std::vector<Word>& out);

/// Decodes a neighborhood record into order keys known to `dir`, preserving
/// order; members unknown to `dir` are dropped. Returns v.
auto decode_neighborhood(std::span<Word const> payload, graph::DegreeDirectory const& dir,
                         std::vector<graph::DegreeOrderKey>& out) -> VertexId;

}  // namespace tricount::algo
