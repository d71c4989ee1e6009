#include "tricount/runtime/aggregation_queue.hpp"

#include <algorithm>

namespace tricount::runtime {

auto AggregationQueue::append(PeId first_hop, RecordHeader const& header, std::span<Word const> payload) -> bool {
  Buffer& buffer = buffers_[first_hop];
  append_record(buffer.words, header, payload);
  buffer.payload_words += payload.size();
  buffer.records += 1;
  buffer.forwards = buffer.forwards || header.final_dst != first_hop;
  buffered_ += payload.size();
  high_water_ = std::max(high_water_, buffered_);
  max_record_ = std::max(max_record_, payload.size());
  return buffered_ > threshold_;
}

auto AggregationQueue::take_all() -> std::vector<std::pair<PeId, Buffer>> {
  std::vector<std::pair<PeId, Buffer>> out;
  out.reserve(buffers_.size());
  for (auto& [dst, buffer] : buffers_) {
    out.emplace_back(dst, std::move(buffer));
  }
  buffers_.clear();
  buffered_ = 0;
  std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
  return out;
}

auto AggregationQueue::take_forwarding() -> std::vector<std::pair<PeId, Buffer>> {
  std::vector<std::pair<PeId, Buffer>> out;
  for (auto it = buffers_.begin(); it != buffers_.end();) {
    if (it->second.forwards) {
      buffered_ -= it->second.payload_words;
      out.emplace_back(it->first, std::move(it->second));
      it = buffers_.erase(it);
    } else {
      ++it;
    }
  }
  std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
  return out;
}

auto AggregationQueue::has_forwarding() const noexcept -> bool {
  return std::any_of(buffers_.begin(), buffers_.end(), [](auto const& entry) { return entry.second.forwards; });
}

}  // namespace tricount::runtime
