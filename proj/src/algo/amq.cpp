#include "tricount/algo/amq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace tricount::algo {

namespace {

constexpr auto mix(std::uint64_t x) -> std::uint64_t {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_rate(double f) {
  if (!(f > 0.0 && f < 1.0)) {
    fail(ErrorKind::parameter, "false-positive rate must lie in (0, 1), got " + std::to_string(f));
  }
}

}  // namespace

auto filter_shape(std::uint64_t q, double f) -> FilterShape {
  check_rate(f);
  if (q == 0) {
    return {64, 1};
  }
  double const ln2 = std::numbers::ln2;
  auto const bits = static_cast<std::uint64_t>(std::ceil(-static_cast<double>(q) * std::log(f) / (ln2 * ln2)));
  auto const hashes = std::max<long long>(1, std::llround(static_cast<double>(bits) / static_cast<double>(q) * ln2));
  return {std::max<std::uint64_t>(bits, 1), static_cast<std::uint32_t>(hashes)};
}

auto filter_seed(std::uint64_t run_seed, VertexId v) -> std::uint64_t { return mix(mix(run_seed) ^ v); }

auto NeighborhoodFilter::bit_of(VertexId x, std::uint32_t i) const -> std::uint64_t {
  return mix(x ^ mix(seed_ + i)) % shape_.bits;
}

auto NeighborhoodFilter::build(std::span<VertexId const> members, double f, std::uint64_t seed)
    -> NeighborhoodFilter {
  NeighborhoodFilter filter;
  filter.shape_ = filter_shape(members.size(), f);
  filter.q_ = members.size();
  filter.seed_ = seed;
  filter.words_.assign(filter.shape_.words(), 0);
  for (VertexId x : members) {
    for (std::uint32_t i = 0; i < filter.shape_.hashes; ++i) {
      auto const b = filter.bit_of(x, i);
      filter.words_[b / 64] |= Word{1} << (b % 64);
    }
  }
  return filter;
}

auto NeighborhoodFilter::from_words(std::uint64_t q, double f, std::uint64_t seed, std::span<Word const> words)
    -> NeighborhoodFilter {
  NeighborhoodFilter filter;
  filter.shape_ = filter_shape(q, f);
  if (words.size() != filter.shape_.words()) {
    fail(ErrorKind::protocol, "filter of " + std::to_string(words.size()) + " words, expected " +
                                  std::to_string(filter.shape_.words()));
  }
  filter.q_ = q;
  filter.seed_ = seed;
  filter.words_.assign(words.begin(), words.end());
  return filter;
}

auto NeighborhoodFilter::contains(VertexId x) const -> bool {
  for (std::uint32_t i = 0; i < shape_.hashes; ++i) {
    auto const b = bit_of(x, i);
    if (((words_[b / 64] >> (b % 64)) & 1U) == 0) return false;
  }
  return true;
}

auto NeighborhoodFilter::realized_fpr() const -> double {
  std::uint64_t set = 0;
  for (Word w : words_) set += static_cast<std::uint64_t>(std::popcount(w));
  return std::pow(static_cast<double>(set) / static_cast<double>(shape_.bits), shape_.hashes);
}

auto amq_count(NeighborhoodFilter const& filter, std::span<VertexId const> queries) -> std::uint64_t {
  return static_cast<std::uint64_t>(
      std::count_if(queries.begin(), queries.end(), [&](VertexId x) { return filter.contains(x); }));
}

auto corrected_estimate(double positives, double queries, double f) -> double {
  check_rate(f);
  return std::clamp((positives - f * queries) / (1.0 - f), 0.0, queries);
}

}  // namespace tricount::algo
