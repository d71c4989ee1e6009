#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::algo {

struct FilterShape {
  std::uint64_t bits = 0;
  std::uint32_t hashes = 0;

  [[nodiscard]] auto words() const noexcept -> std::uint64_t { return (bits + 63) / 64; }
};

/// bits = ceil(-q ln f / (ln 2)^2), hashes = max(1, round(bits / q * ln 2)).
/// Throws parameter unless 0 < f < 1.
auto filter_shape(std::uint64_t q, double f) -> FilterShape;

/// Bloom filter over a vertex set; no false negatives.
class NeighborhoodFilter {
 public:
  NeighborhoodFilter() = default;

  static auto build(std::span<VertexId const> members, double f, std::uint64_t seed) -> NeighborhoodFilter;
  /// Rebuilds a received filter; q is the number of inserted elements.
  static auto from_words(std::uint64_t q, double f, std::uint64_t seed, std::span<Word const> words)
      -> NeighborhoodFilter;

  [[nodiscard]] auto contains(VertexId x) const -> bool;
  [[nodiscard]] auto num_elements() const noexcept -> std::uint64_t { return q_; }
  [[nodiscard]] auto shape() const noexcept -> FilterShape const& { return shape_; }
  [[nodiscard]] auto words() const noexcept -> std::span<Word const> { return words_; }
  [[nodiscard]] auto seed() const noexcept -> std::uint64_t { return seed_; }

  /// (set bits / bits)^hashes, the false-positive probability of this instance.
  [[nodiscard]] auto realized_fpr() const -> double;

 private:
  [[nodiscard]] auto bit_of(VertexId x, std::uint32_t i) const -> std::uint64_t;

  FilterShape shape_;
  std::uint64_t q_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Word> words_;
};

/// Number of queries that test positive.
auto amq_count(NeighborhoodFilter const& filter, std::span<VertexId const> queries) -> std::uint64_t;

/// (C - f q) / (1 - f), clamped to [0, q].
auto corrected_estimate(double positives, double queries, double f) -> double;

/// Per-vertex filter seed derived from a run seed.
auto filter_seed(std::uint64_t run_seed, VertexId v) -> std::uint64_t;

}  // namespace tricount::algo
