#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tricount/runtime/record.hpp"

namespace tricount::runtime {

inline constexpr std::size_t kMinThreshold = std::size_t{1} << 14;

/// Per-destination message buffers with a global threshold δ on the total
/// number of buffered payload words B. Callers flush everything as soon as
/// append() reports B > δ, so B never exceeds δ plus one record.
class AggregationQueue {
 public:
  struct Buffer {
    std::vector<Word> words;
    std::size_t payload_words = 0;
    std::size_t records = 0;
    /// Holds at least one record whose final destination is not the buffer's
    /// destination, i.e. traffic that a proxy will forward.
    bool forwards = false;
  };

  explicit AggregationQueue(std::size_t threshold = kMinThreshold) : threshold_(threshold) {}

  [[nodiscard]] auto threshold() const noexcept -> std::size_t { return threshold_; }
  void set_threshold(std::size_t threshold) noexcept { threshold_ = threshold; }

  /// Records with more payload words than δ bypass the buffers.
  [[nodiscard]] auto is_oversize(std::size_t payload_words) const noexcept -> bool {
    return payload_words > threshold_;
  }

  /// Appends a record to B_{first_hop}; returns true when B now exceeds δ.
  auto append(PeId first_hop, RecordHeader const& header, std::span<Word const> payload) -> bool;

  /// Empties every non-empty buffer, ordered by destination.
  auto take_all() -> std::vector<std::pair<PeId, Buffer>>;
  /// Empties only buffers that carry proxy traffic.
  auto take_forwarding() -> std::vector<std::pair<PeId, Buffer>>;

  [[nodiscard]] auto empty() const noexcept -> bool { return buffers_.empty(); }
  [[nodiscard]] auto has_forwarding() const noexcept -> bool;
  [[nodiscard]] auto buffered_words() const noexcept -> std::size_t { return buffered_; }

  /// Largest B observed and largest single record seen since the last reset.
  [[nodiscard]] auto high_water_mark() const noexcept -> std::size_t { return high_water_; }
  [[nodiscard]] auto max_record_words() const noexcept -> std::size_t { return max_record_; }
  void reset_statistics() noexcept {
    high_water_ = buffered_;
    max_record_ = 0;
  }

 private:
  std::size_t threshold_;
  std::unordered_map<PeId, Buffer> buffers_;
  std::size_t buffered_ = 0;
  std::size_t high_water_ = 0;
  std::size_t max_record_ = 0;
};

}  // namespace tricount::runtime
