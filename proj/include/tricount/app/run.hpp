#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tricount/algo/degree_exchange.hpp"
#include "tricount/runtime/cluster.hpp"
#include "tricount/types.hpp"

namespace tricount::app {

enum class OutputFormat { json, csv };

struct RunConfig {
  /// seq, ditric, ditric2, cetric or cetric2.
  std::string algorithm = "cetric";
  PeId pes = 1;
  /// Exactly one of input (edge list path) and generator (spec string).
  std::optional<std::string> input;
  std::optional<std::string> generator;
  /// Aggregation threshold for every PE; default max(|E_i|, 2^14).
  std::optional<std::uint64_t> delta;
  double alpha = 1.0;
  double beta = 0.01;
  bool lcc = false;
  /// Optional path for a "vertex delta lcc" dump (original ids).
  std::optional<std::string> lcc_out;
  bool approx = false;
  double fpr = 0.01;
  /// Seeds the generator (unless its spec names a seed) and the filters.
  std::uint64_t seed = 0;
  runtime::Scheduler scheduler = runtime::Scheduler::deterministic;
  algo::ExchangeMode exchange = algo::ExchangeMode::sparse;
  OutputFormat format = OutputFormat::json;
  /// Wall-clock fields are zeroed when false, making reports reproducible.
  bool timing = true;

  friend auto operator==(RunConfig const&, RunConfig const&) -> bool = default;
};

/// Throws parameter on inconsistent settings.
void validate(RunConfig const& config);

struct PhaseSummary {
  std::string name;
  double wall_seconds = 0.0;
  std::uint64_t max_messages_sent = 0;
  std::uint64_t max_words_sent = 0;
  std::uint64_t total_words = 0;
  double modeled_time = 0.0;

  friend auto operator==(PhaseSummary const&, PhaseSummary const&) -> bool = default;
};

struct RunReport {
  RunConfig config;
  VertexId n = 0;
  std::uint64_t m = 0;
  std::uint64_t triangles = 0;
  std::uint64_t local_phase = 0;
  std::uint64_t global_phase = 0;
  bool approximate = false;
  std::optional<double> estimate_corrected;
  /// Wall time from the end of ingestion to the final count.
  double total_seconds = 0.0;
  std::vector<PhaseSummary> phases;

  std::uint64_t max_messages_sent = 0;  ///< max outgoing messages over all PEs
  std::uint64_t max_messages_received = 0;
  std::uint64_t max_words_sent = 0;  ///< bottleneck communication volume
  std::uint64_t max_words_received = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t total_words = 0;
  std::uint64_t max_neighborhood_words = 0;
  double modeled_time = 0.0;
  std::uint64_t max_buffered_words = 0;
  std::uint64_t max_record_words = 0;
  std::uint64_t buffer_bound_violations = 0;

  friend auto operator==(RunReport const&, RunReport const&) -> bool = default;
};

struct RunHooks {
  /// Replaces reading or generating the raw edge list.
  std::function<std::vector<Edge>(RunConfig const&)> load;
};

auto run(RunConfig const& config, RunHooks const& hooks = {}) -> RunReport;

/// One report per PE count, sharing the ingested graph.
auto run_sweep(RunConfig const& config, std::vector<PeId> const& pes, RunHooks const& hooks = {})
    -> std::vector<RunReport>;

/// JSON: one object, or an array for several reports. CSV: header row plus
/// one row per report.
auto emit(std::vector<RunReport> const& reports, OutputFormat format) -> std::string;
auto emit(RunReport const& report, OutputFormat format) -> std::string;
auto parse_reports(std::string_view text, OutputFormat format) -> std::vector<RunReport>;

auto format_name(OutputFormat f) -> std::string_view;
auto parse_format(std::string_view name) -> std::optional<OutputFormat>;
auto scheduler_name(runtime::Scheduler s) -> std::string_view;
auto parse_scheduler(std::string_view name) -> std::optional<runtime::Scheduler>;

/// Process exit status for an error category.
auto exit_code(ErrorKind kind) -> int;

}  // namespace tricount::app
