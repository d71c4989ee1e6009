#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tricount/routing/grid.hpp"
#include "tricount/runtime/aggregation_queue.hpp"
#include "tricount/runtime/cost.hpp"
#include "tricount/runtime/record.hpp"

namespace tricount::runtime {

enum class Scheduler { deterministic, threaded };

struct ClusterConfig {
  PeId num_pes = 1;
  CostModel cost;
  /// Replaces every PE's own δ when set.
  std::optional<std::size_t> threshold;
  Scheduler scheduler = Scheduler::deterministic;
  /// Deterministic scheduler: maximum number of rounds per run.
  std::size_t step_budget = std::size_t{1} << 24;
  /// Threaded scheduler: wall-clock limit per run.
  std::chrono::milliseconds timeout{120000};
  bool trace = false;
};

struct RunOptions {
  /// Route every inter-PE record through its grid proxy.
  bool indirect = false;
};

enum class Progress { more, done };

class PeContext;
using Handler = std::function<void(PeContext&, RecordView const&)>;
using StepFn = std::function<Progress(PeContext&)>;
/// Called once per PE before the run to register handlers; returns that PE's
/// step function. An empty StepFn means the PE has no main work.
using Program = std::function<StepFn(PeContext&)>;

struct TracedRecord {
  PeId origin = 0;
  PeId final_dst = 0;
  Tag tag = Tag::control;
  std::vector<Word> payload;
};

struct TracedHop {
  PeId src = 0;
  PeId dst = 0;
  std::size_t words = 0;
  std::size_t records = 0;
};

/// Traffic log of one run, collected when ClusterConfig::trace is set.
/// `posted` holds records as issued by their origin, `delivered` as handed to
/// a handler at their final destination; self records appear in both.
struct Trace {
  std::vector<TracedRecord> posted;
  std::vector<TracedRecord> delivered;
  std::vector<TracedHop> hops;
};

class Cluster;

namespace detail {

struct Inbox {
  std::mutex mutex;
  std::condition_variable ready;
  std::deque<Envelope> envelopes;
};

struct SelfRecord {
  Tag tag;
  std::vector<Word> payload;
};

}  // namespace detail

class PeContext {
 public:
  PeContext(Cluster& cluster, PeId rank);

  [[nodiscard]] auto rank() const noexcept -> PeId { return rank_; }
  [[nodiscard]] auto num_pes() const noexcept -> PeId;

  void on(Tag tag, Handler handler);

  /// Buffers one record for dst. Self records are queued locally and never
  /// billed. A record larger than δ is sent at once in its own envelope.
  void post(PeId dst, Tag tag, std::span<Word const> payload);

  /// Hands every delivered envelope to the registered handlers, forwarding
  /// records addressed elsewhere, then drains self records. Returns the number
  /// of envelopes and self records processed.
  auto poll() -> std::size_t;

  /// Sends every non-empty buffer.
  void flush();

  [[nodiscard]] auto queue() const noexcept -> AggregationQueue const& { return queue_; }
  [[nodiscard]] auto counters() const noexcept -> PeCounters const& { return counters_; }

 private:
  friend class Cluster;

  void post_record(PeId first_hop, RecordHeader const& header, std::span<Word const> payload);
  void transmit(PeId dst, std::vector<Word> words, std::size_t records, std::size_t payload_words);
  void send_buffers(std::vector<std::pair<PeId, AggregationQueue::Buffer>> buffers);
  void dispatch(RecordView const& record);
  [[nodiscard]] auto has_pending_input() -> bool;

  Cluster* cluster_;
  PeId rank_;
  AggregationQueue queue_;
  PeCounters counters_;
  std::vector<Handler> handlers_;
  std::deque<detail::SelfRecord> self_inbox_;
  bool indirect_ = false;
  Trace trace_;
};

/// A simulated machine of p PEs. Each run executes one program on all PEs
/// until global quiescence and returns the communication it caused.
class Cluster {
 public:
  explicit Cluster(ClusterConfig config);
  Cluster(Cluster const&) = delete;
  auto operator=(Cluster const&) -> Cluster& = delete;
  ~Cluster();

  [[nodiscard]] auto config() const noexcept -> ClusterConfig const& { return config_; }
  [[nodiscard]] auto num_pes() const noexcept -> PeId { return config_.num_pes; }
  [[nodiscard]] auto grid() const noexcept -> routing::GridShape const& { return grid_; }

  /// Sets the aggregation threshold of one PE unless the config overrides it.
  void set_threshold(PeId pe, std::size_t threshold);
  [[nodiscard]] auto threshold(PeId pe) const -> std::size_t;

  /// Runs `program` until every step function is done, every buffer is
  /// flushed, nothing is in flight and every inbox is empty.
  auto run_until_quiescent(Program const& program, RunOptions options = {}) -> CostReport;

  /// Traffic of the most recent run (empty unless tracing is enabled).
  [[nodiscard]] auto last_trace() const noexcept -> Trace const& { return trace_; }

  /// Bills one direct envelope from src to dst outside of any run; used by
  /// collectives that bypass the aggregation queue.
  void bill_direct(CostReport& report, PeId src, PeId dst, Tag tag, std::size_t payload_words) const;

 private:
  friend class PeContext;

  void deliver(Envelope envelope);
  void run_deterministic(std::vector<StepFn>& steps);
  void run_threaded(std::vector<StepFn>& steps);
  auto collect(CostModel const& model) -> CostReport;

  ClusterConfig config_;
  routing::GridShape grid_;
  std::vector<std::size_t> thresholds_;
  std::vector<std::unique_ptr<PeContext>> pes_;
  std::vector<std::unique_ptr<detail::Inbox>> inboxes_;

  // Termination bookkeeping shared by the threaded scheduler.
  std::mutex state_mutex_;
  std::uint64_t injected_ = 0;
  std::uint64_t consumed_ = 0;
  std::vector<char> idle_;
  bool threaded_run_ = false;

  Trace trace_;
};

}  // namespace tricount::runtime
