#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>

#include "tricount/types.hpp"

namespace tricount::seq {

/// Merge-style intersection of two strictly increasing sequences; calls
/// `on_common` for every shared element. O(|a| + |b|) comparisons.
template <typename T, typename OnCommon, typename Less = std::less<>>
auto intersect_for_each(std::span<T const> a, std::span<T const> b, OnCommon&& on_common, Less less = {})
    -> std::uint64_t {
  std::uint64_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (less(*ia, *ib)) {
      ++ia;
    } else if (less(*ib, *ia)) {
      ++ib;
    } else {
      on_common(*ia);
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

template <typename T, typename Less = std::less<>>
auto is_strictly_sorted(std::span<T const> s, Less less = {}) -> bool {
  return std::adjacent_find(s.begin(), s.end(), [&](T const& x, T const& y) { return !less(x, y); }) == s.end();
}

/// |a ∩ b| that always validates strict ordering first.
template <typename T, typename Less = std::less<>>
auto intersect_count_checked(std::span<T const> a, std::span<T const> b, Less less = {}) -> std::uint64_t {
  if (!is_strictly_sorted(a, less) || !is_strictly_sorted(b, less)) {
    fail(ErrorKind::parameter, "intersect_count: input not strictly sorted");
  }
  return intersect_for_each(a, b, [](T const&) {}, less);
}

/// |a ∩ b|; the ordering precondition is validated in debug builds.
template <typename T, typename Less = std::less<>>
auto intersect_count(std::span<T const> a, std::span<T const> b, Less less = {}) -> std::uint64_t {
#ifndef NDEBUG
  return intersect_count_checked(a, b, less);
#else
  return intersect_for_each(a, b, [](T const&) {}, less);
#endif
}

}  // namespace tricount::seq
