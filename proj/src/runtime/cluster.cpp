#include "tricount/runtime/cluster.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

namespace tricount::runtime {

namespace {

auto tag_index(Tag tag) -> std::size_t { return static_cast<std::size_t>(tag); }

}  // namespace

// ---------------------------------------------------------------------------
// PeContext

PeContext::PeContext(Cluster& cluster, PeId rank) : cluster_(&cluster), rank_(rank) {}

auto PeContext::num_pes() const noexcept -> PeId { return cluster_->num_pes(); }

void PeContext::on(Tag tag, Handler handler) {
  auto const t = tag_index(tag);
  if (t >= kNumTags) {
    fail(ErrorKind::parameter, "tag out of range");
  }
  if (handlers_.size() < kNumTags) {
    handlers_.resize(kNumTags);
  }
  handlers_[t] = std::move(handler);
}

void PeContext::post(PeId dst, Tag tag, std::span<Word const> payload) {
  if (dst >= num_pes()) {
    fail(ErrorKind::parameter, "post to PE " + std::to_string(dst) + " of " + std::to_string(num_pes()));
  }
  if (tag_index(tag) >= kNumTags) {
    fail(ErrorKind::parameter, "tag out of range");
  }
  if (cluster_->config_.trace) {
    trace_.posted.push_back({rank_, dst, tag, {payload.begin(), payload.end()}});
  }
  if (dst == rank_) {
    self_inbox_.push_back({tag, {payload.begin(), payload.end()}});
    return;
  }
  PeId const first_hop = indirect_ ? routing::route(rank_, dst, cluster_->grid_).first() : dst;
  post_record(first_hop, {tag, rank_, dst, payload.size()}, payload);
}

void PeContext::post_record(PeId first_hop, RecordHeader const& header, std::span<Word const> payload) {
  if (queue_.is_oversize(payload.size())) {
    std::vector<Word> words;
    words.reserve(payload.size() + kHeaderWords);
    append_record(words, header, payload);
    transmit(first_hop, std::move(words), 1, payload.size());
    return;
  }
  if (queue_.append(first_hop, header, payload)) {
    flush();
  }
}

void PeContext::transmit(PeId dst, std::vector<Word> words, std::size_t records, std::size_t payload_words) {
  counters_.messages_sent += 1;
  counters_.words_sent += words.size();
  for_each_record(words, [&](RecordView const& r) {
    auto const t = tag_index(r.tag);
    counters_.records_sent[t] += 1;
    counters_.tag_words_sent[t] += r.payload.size() + kHeaderWords;
  });
  if (cluster_->config_.trace) {
    trace_.hops.push_back({rank_, dst, words.size(), records});
  }
  cluster_->deliver({rank_, dst, std::move(words), records, payload_words});
}

void PeContext::send_buffers(std::vector<std::pair<PeId, AggregationQueue::Buffer>> buffers) {
  for (auto& [dst, buffer] : buffers) {
    transmit(dst, std::move(buffer.words), buffer.records, buffer.payload_words);
  }
}

void PeContext::flush() { send_buffers(queue_.take_all()); }

void PeContext::dispatch(RecordView const& record) {
  auto const t = tag_index(record.tag);
  if (t >= handlers_.size() || !handlers_[t]) {
    fail(ErrorKind::dispatch, "PE " + std::to_string(rank_) + " has no handler for tag " +
                                  std::string(tag_name(record.tag)));
  }
  if (cluster_->config_.trace) {
    trace_.delivered.push_back(
        {record.origin, record.final_dst, record.tag, {record.payload.begin(), record.payload.end()}});
  }
  handlers_[t](*this, record);
}

auto PeContext::poll() -> std::size_t {
  std::deque<Envelope> batch;
  {
    detail::Inbox& inbox = *cluster_->inboxes_[rank_];
    std::lock_guard const lock(inbox.mutex);
    batch.swap(inbox.envelopes);
  }
  if (!batch.empty()) {
    std::lock_guard const lock(cluster_->state_mutex_);
    cluster_->idle_[rank_] = 0;
  }
  std::size_t processed = 0;
  for (Envelope const& envelope : batch) {
    counters_.messages_received += 1;
    counters_.words_received += envelope.words.size();
    for_each_record(envelope.words, [&](RecordView const& r) {
      auto const t = tag_index(r.tag);
      if (t >= kNumTags) {
        fail(ErrorKind::dispatch, "record with invalid tag");
      }
      counters_.records_received[t] += 1;
      counters_.tag_words_received[t] += r.payload.size() + kHeaderWords;
      if (r.final_dst != rank_) {
        post_record(r.final_dst, {r.tag, r.origin, r.final_dst, r.payload.size()}, r.payload);
      } else {
        dispatch(r);
      }
    });
    {
      std::lock_guard const lock(cluster_->state_mutex_);
      cluster_->consumed_ += 1;
    }
    ++processed;
  }
  while (!self_inbox_.empty()) {
    detail::SelfRecord record = std::move(self_inbox_.front());
    self_inbox_.pop_front();
    dispatch({record.tag, rank_, rank_, record.payload});
    ++processed;
  }
  return processed;
}

auto PeContext::has_pending_input() -> bool {
  if (!self_inbox_.empty()) {
    return true;
  }
  detail::Inbox& inbox = *cluster_->inboxes_[rank_];
  std::lock_guard const lock(inbox.mutex);
  return !inbox.envelopes.empty();
}

// ---------------------------------------------------------------------------
// Cluster

Cluster::Cluster(ClusterConfig config)
    : config_(config), grid_(routing::grid_shape(config.num_pes)), thresholds_(config.num_pes, kMinThreshold) {
  if (config_.num_pes > kMaxPes) {
    fail(ErrorKind::parameter, "too many PEs");
  }
  pes_.reserve(config_.num_pes);
  inboxes_.reserve(config_.num_pes);
  for (PeId i = 0; i < config_.num_pes; ++i) {
    pes_.push_back(std::make_unique<PeContext>(*this, i));
    inboxes_.push_back(std::make_unique<detail::Inbox>());
  }
  idle_.assign(config_.num_pes, 0);
}

Cluster::~Cluster() = default;

void Cluster::set_threshold(PeId pe, std::size_t threshold) { thresholds_.at(pe) = threshold; }

auto Cluster::threshold(PeId pe) const -> std::size_t {
  return config_.threshold.value_or(thresholds_.at(pe));
}

void Cluster::deliver(Envelope envelope) {
  {
    std::lock_guard const lock(state_mutex_);
    injected_ += 1;
  }
  detail::Inbox& inbox = *inboxes_.at(envelope.dst);
  {
    std::lock_guard const lock(inbox.mutex);
    inbox.envelopes.push_back(std::move(envelope));
  }
  inbox.ready.notify_one();
}

void Cluster::bill_direct(CostReport& report, PeId src, PeId dst, Tag tag, std::size_t payload_words) const {
  if (src == dst) {
    return;
  }
  auto const t = tag_index(tag);
  auto const words = payload_words + kHeaderWords;
  PeCounters& s = report.pe(src);
  s.messages_sent += 1;
  s.words_sent += words;
  s.records_sent[t] += 1;
  s.tag_words_sent[t] += words;
  PeCounters& r = report.pe(dst);
  r.messages_received += 1;
  r.words_received += words;
  r.records_received[t] += 1;
  r.tag_words_received[t] += words;
}

auto Cluster::run_until_quiescent(Program const& program, RunOptions options) -> CostReport {
  for (PeId i = 0; i < num_pes(); ++i) {
    PeContext& ctx = *pes_[i];
    ctx.handlers_.clear();
    ctx.counters_ = {};
    ctx.queue_.set_threshold(threshold(i));
    ctx.queue_.reset_statistics();
    ctx.indirect_ = options.indirect && num_pes() > 1;
    ctx.trace_ = {};
  }
  injected_ = 0;
  consumed_ = 0;
  std::fill(idle_.begin(), idle_.end(), 0);

  auto reset = [this] {
    for (PeId i = 0; i < num_pes(); ++i) {
      PeContext& ctx = *pes_[i];
      ctx.handlers_.clear();
      ctx.self_inbox_.clear();
      (void)ctx.queue_.take_all();
      std::lock_guard const lock(inboxes_[i]->mutex);
      inboxes_[i]->envelopes.clear();
    }
  };

  try {
    std::vector<StepFn> steps;
    steps.reserve(num_pes());
    for (PeId i = 0; i < num_pes(); ++i) {
      steps.push_back(program(*pes_[i]));
    }
    if (config_.scheduler == Scheduler::deterministic) {
      run_deterministic(steps);
    } else {
      run_threaded(steps);
    }
  } catch (...) {
    reset();
    throw;
  }
  CostReport report = collect(config_.cost);
  reset();
  return report;
}

auto Cluster::collect(CostModel const& model) -> CostReport {
  CostReport report(model, num_pes());
  trace_ = {};
  for (PeId i = 0; i < num_pes(); ++i) {
    PeContext& ctx = *pes_[i];
    report.pe(i) = ctx.counters_;
    auto const high = ctx.queue_.high_water_mark();
    auto const largest = ctx.queue_.max_record_words();
    report.max_buffered_words = std::max<std::uint64_t>(report.max_buffered_words, high);
    report.max_record_words = std::max<std::uint64_t>(report.max_record_words, largest);
    report.max_threshold = std::max<std::uint64_t>(report.max_threshold, ctx.queue_.threshold());
    if (high > ctx.queue_.threshold() + largest) {
      report.buffer_bound_violations += 1;
    }
    if (config_.trace) {
      auto move_into = [](auto& dst, auto& src) {
        dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
      };
      move_into(trace_.posted, ctx.trace_.posted);
      move_into(trace_.delivered, ctx.trace_.delivered);
      move_into(trace_.hops, ctx.trace_.hops);
      ctx.trace_ = {};
    }
  }
  return report;
}

void Cluster::run_deterministic(std::vector<StepFn>& steps) {
  PeId const p = num_pes();
  std::vector<char> done(p);
  for (PeId i = 0; i < p; ++i) {
    done[i] = steps[i] ? 0 : 1;
  }
  std::size_t rounds = 0;
  while (true) {
    bool active = false;
    for (PeId i = 0; i < p; ++i) {
      PeContext& ctx = *pes_[i];
      if (!done[i]) {
        if (steps[i](ctx) == Progress::done) {
          done[i] = 1;
        }
        active = true;
      }
      if (ctx.poll() > 0) {
        active = true;
      }
    }
    if (++rounds > config_.step_budget) {
      std::ostringstream msg;
      msg << "no quiescence after " << config_.step_budget << " rounds; running PEs:";
      for (PeId i = 0; i < p; ++i) {
        if (!done[i]) msg << ' ' << i;
      }
      std::size_t buffered = 0;
      for (auto const& ctx : pes_) buffered += ctx->queue_.buffered_words();
      msg << "; buffered words: " << buffered << "; in flight: " << injected_ - consumed_;
      fail(ErrorKind::livelock, msg.str());
    }
    if (active) {
      continue;
    }
    // Everyone is idle. Release proxy-bound traffic first so proxies can
    // aggregate it with their own records, then everything else.
    bool const forwarding =
        std::any_of(pes_.begin(), pes_.end(), [](auto const& ctx) { return ctx->queue_.has_forwarding(); });
    if (forwarding) {
      for (auto& ctx : pes_) ctx->send_buffers(ctx->queue_.take_forwarding());
      continue;
    }
    bool const buffered = std::any_of(pes_.begin(), pes_.end(), [](auto const& ctx) { return !ctx->queue_.empty(); });
    if (buffered) {
      for (auto& ctx : pes_) ctx->flush();
      continue;
    }
    // Second scan: nothing buffered, nothing in flight, nothing pending.
    bool const pending = std::any_of(pes_.begin(), pes_.end(), [](auto const& ctx) { return ctx->has_pending_input(); });
    if (!pending && injected_ == consumed_) {
      return;
    }
  }
}

void Cluster::run_threaded(std::vector<StepFn>& steps) {
  PeId const p = num_pes();
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  auto const deadline = std::chrono::steady_clock::now() + config_.timeout;
  threaded_run_ = true;

  auto wake_all = [this] {
    for (auto& inbox : inboxes_) {
      std::lock_guard const lock(inbox->mutex);
      inbox->ready.notify_all();
    }
  };
  auto all_quiet = [this] {
    return injected_ == consumed_ && std::all_of(idle_.begin(), idle_.end(), [](char c) { return c != 0; });
  };

  auto worker = [&](PeId i) {
    PeContext& ctx = *pes_[i];
    bool done = !steps[i];
    try {
      while (!stop.load()) {
        bool did = false;
        if (!done) {
          done = steps[i](ctx) == Progress::done;
          did = true;
        }
        if (ctx.poll() > 0) {
          did = true;
        }
        if (std::chrono::steady_clock::now() > deadline) {
          fail(ErrorKind::livelock, "no quiescence within " + std::to_string(config_.timeout.count()) + " ms");
        }
        if (!done || did) {
          continue;
        }
        if (!ctx.queue_.empty()) {
          if (ctx.queue_.has_forwarding()) {
            ctx.send_buffers(ctx.queue_.take_forwarding());
          } else {
            ctx.flush();
          }
          continue;
        }
        if (ctx.has_pending_input()) {
          continue;
        }
        std::uint64_t seen = 0;
        bool candidate = false;
        {
          std::lock_guard const lock(state_mutex_);
          idle_[i] = 1;
          if (all_quiet()) {
            candidate = true;
            seen = injected_;
          }
        }
        if (candidate) {
          std::this_thread::sleep_for(std::chrono::milliseconds(1));
          std::lock_guard const lock(state_mutex_);
          if (all_quiet() && injected_ == seen) {
            stop.store(true);
          }
        }
        if (stop.load()) {
          wake_all();
          break;
        }
        detail::Inbox& inbox = *inboxes_[i];
        std::unique_lock lock(inbox.mutex);
        inbox.ready.wait_for(lock, std::chrono::milliseconds(1),
                             [&] { return !inbox.envelopes.empty() || stop.load(); });
      }
    } catch (...) {
      {
        std::lock_guard const lock(state_mutex_);
        if (!error) error = std::current_exception();
      }
      stop.store(true);
      wake_all();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(p);
  for (PeId i = 0; i < p; ++i) {
    threads.emplace_back(worker, i);
  }
  for (auto& t : threads) {
    t.join();
  }
  threaded_run_ = false;
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace tricount::runtime
