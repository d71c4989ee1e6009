#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tricount/runtime/record.hpp"

namespace tricount::runtime {

/// Sending ℓ words costs alpha + beta * ℓ.
struct CostModel {
  double alpha = 1.0;
  double beta = 0.01;

  friend auto operator==(CostModel const&, CostModel const&) -> bool = default;
};

/// Transport counters of one PE. Words include record framing; self
/// deliveries are not counted.
struct PeCounters {
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_received = 0;
  std::uint64_t words_sent = 0;
  std::uint64_t words_received = 0;
  std::array<std::uint64_t, kNumTags> records_sent{};
  std::array<std::uint64_t, kNumTags> records_received{};
  std::array<std::uint64_t, kNumTags> tag_words_sent{};
  std::array<std::uint64_t, kNumTags> tag_words_received{};

  auto operator+=(PeCounters const& other) -> PeCounters&;
  friend auto operator==(PeCounters const&, PeCounters const&) -> bool = default;
};

class CostReport {
 public:
  CostReport() = default;
  CostReport(CostModel model, std::size_t num_pes) : model_(model), per_pe_(num_pes) {}

  [[nodiscard]] auto model() const noexcept -> CostModel const& { return model_; }
  [[nodiscard]] auto num_pes() const noexcept -> std::size_t { return per_pe_.size(); }
  [[nodiscard]] auto pe(std::size_t i) const -> PeCounters const& { return per_pe_.at(i); }
  [[nodiscard]] auto pe(std::size_t i) -> PeCounters& { return per_pe_.at(i); }
  [[nodiscard]] auto per_pe() const noexcept -> std::vector<PeCounters> const& { return per_pe_; }

  [[nodiscard]] auto max_messages_sent() const -> std::uint64_t;
  [[nodiscard]] auto max_messages_received() const -> std::uint64_t;
  /// Bottleneck communication volume.
  [[nodiscard]] auto max_words_sent() const -> std::uint64_t;
  [[nodiscard]] auto max_words_received() const -> std::uint64_t;
  [[nodiscard]] auto total_messages() const -> std::uint64_t;
  [[nodiscard]] auto total_words() const -> std::uint64_t;
  [[nodiscard]] auto mean_words_sent() const -> double;
  [[nodiscard]] auto max_tag_words_sent(Tag tag) const -> std::uint64_t;
  [[nodiscard]] auto total_tag_words_sent(Tag tag) const -> std::uint64_t;
  [[nodiscard]] auto total_records_sent(Tag tag) const -> std::uint64_t;
  [[nodiscard]] auto total_records_received(Tag tag) const -> std::uint64_t;

  /// alpha * messages_sent + beta * words_sent of one PE.
  [[nodiscard]] auto modeled_time_of(std::size_t i) const -> double;
  /// Maximum over PEs.
  [[nodiscard]] auto modeled_time() const -> double;

  /// Largest aggregate buffer occupancy B seen on any PE, and the largest
  /// single record; B <= δ + max record is the memory bound.
  std::uint64_t max_buffered_words = 0;
  std::uint64_t max_record_words = 0;
  std::uint64_t max_threshold = 0;
  /// PEs whose occupancy exceeded their own δ plus their largest record.
  std::uint64_t buffer_bound_violations = 0;

  /// Adds counters PE-wise; buffer statistics take the maximum.
  auto operator+=(CostReport const& other) -> CostReport&;
  friend auto operator==(CostReport const&, CostReport const&) -> bool = default;

 private:
  CostModel model_;
  std::vector<PeCounters> per_pe_;
};

}  // namespace tricount::runtime
