#include "tricount/runtime/cost.hpp"

#include <algorithm>
#include <numeric>

namespace tricount::runtime {

auto PeCounters::operator+=(PeCounters const& other) -> PeCounters& {
  messages_sent += other.messages_sent;
  messages_received += other.messages_received;
  words_sent += other.words_sent;
  words_received += other.words_received;
  for (std::size_t t = 0; t < kNumTags; ++t) {
    records_sent[t] += other.records_sent[t];
    records_received[t] += other.records_received[t];
    tag_words_sent[t] += other.tag_words_sent[t];
    tag_words_received[t] += other.tag_words_received[t];
  }
  return *this;
}

namespace {

template <typename F>
auto max_over(std::vector<PeCounters> const& pes, F&& field) -> std::uint64_t {
  std::uint64_t result = 0;
  for (auto const& c : pes) {
    result = std::max(result, field(c));
  }
  return result;
}

template <typename F>
auto sum_over(std::vector<PeCounters> const& pes, F&& field) -> std::uint64_t {
  return std::accumulate(pes.begin(), pes.end(), std::uint64_t{0},
                         [&](std::uint64_t acc, PeCounters const& c) { return acc + field(c); });
}

}  // namespace

auto CostReport::max_messages_sent() const -> std::uint64_t {
  return max_over(per_pe_, [](auto const& c) { return c.messages_sent; });
}
auto CostReport::max_messages_received() const -> std::uint64_t {
  return max_over(per_pe_, [](auto const& c) { return c.messages_received; });
}
auto CostReport::max_words_sent() const -> std::uint64_t {
  return max_over(per_pe_, [](auto const& c) { return c.words_sent; });
}
auto CostReport::max_words_received() const -> std::uint64_t {
  return max_over(per_pe_, [](auto const& c) { return c.words_received; });
}
auto CostReport::total_messages() const -> std::uint64_t {
  return sum_over(per_pe_, [](auto const& c) { return c.messages_sent; });
}
auto CostReport::total_words() const -> std::uint64_t {
  return sum_over(per_pe_, [](auto const& c) { return c.words_sent; });
}
auto CostReport::mean_words_sent() const -> double {
  return per_pe_.empty() ? 0.0 : static_cast<double>(total_words()) / static_cast<double>(per_pe_.size());
}
auto CostReport::max_tag_words_sent(Tag tag) const -> std::uint64_t {
  auto const t = static_cast<std::size_t>(tag);
  return max_over(per_pe_, [t](auto const& c) { return c.tag_words_sent[t]; });
}
auto CostReport::total_tag_words_sent(Tag tag) const -> std::uint64_t {
  auto const t = static_cast<std::size_t>(tag);
  return sum_over(per_pe_, [t](auto const& c) { return c.tag_words_sent[t]; });
}
auto CostReport::total_records_sent(Tag tag) const -> std::uint64_t {
  auto const t = static_cast<std::size_t>(tag);
  return sum_over(per_pe_, [t](auto const& c) { return c.records_sent[t]; });
}
auto CostReport::total_records_received(Tag tag) const -> std::uint64_t {
  auto const t = static_cast<std::size_t>(tag);
  return sum_over(per_pe_, [t](auto const& c) { return c.records_received[t]; });
}

auto CostReport::modeled_time_of(std::size_t i) const -> double {
  auto const& c = per_pe_.at(i);
  return model_.alpha * static_cast<double>(c.messages_sent) + model_.beta * static_cast<double>(c.words_sent);
}

auto CostReport::modeled_time() const -> double {
  double result = 0.0;
  for (std::size_t i = 0; i < per_pe_.size(); ++i) {
    result = std::max(result, modeled_time_of(i));
  }
  return result;
}

auto CostReport::operator+=(CostReport const& other) -> CostReport& {
  if (per_pe_.empty()) {
    model_ = other.model_;
    per_pe_.resize(other.per_pe_.size());
  }
  for (std::size_t i = 0; i < std::min(per_pe_.size(), other.per_pe_.size()); ++i) {
    per_pe_[i] += other.per_pe_[i];
  }
  max_buffered_words = std::max(max_buffered_words, other.max_buffered_words);
  max_record_words = std::max(max_record_words, other.max_record_words);
  max_threshold = std::max(max_threshold, other.max_threshold);
  buffer_bound_violations += other.buffer_bound_violations;
  return *this;
}

}  // namespace tricount::runtime
