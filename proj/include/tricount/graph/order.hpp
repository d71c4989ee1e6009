#pragma once

#include <compare>
#include <optional>

#include "tricount/types.hpp"

namespace tricount::graph {

/// Degree-based total order: lower degree first, ties broken by id.
struct DegreeOrderKey {
  Degree degree = 0;
  VertexId id = 0;

  friend constexpr auto operator<=>(DegreeOrderKey const&, DegreeOrderKey const&) = default;
};

/// Compares u and v under the degree order. `degree_of` maps a vertex to its
/// degree, or nullopt when it is unknown on this PE.
template <typename DegreeAccessor>
auto compare_order(VertexId u, VertexId v, DegreeAccessor&& degree_of) -> std::strong_ordering {
  if (u == v) {
    return std::strong_ordering::equal;
  }
  std::optional<Degree> const du = degree_of(u);
  std::optional<Degree> const dv = degree_of(v);
  if (!du || !dv) {
    fail(ErrorKind::missing_degree,
         "degree of vertex " + std::to_string(!du ? u : v) + " is unknown");
  }
  return DegreeOrderKey{*du, u} <=> DegreeOrderKey{*dv, v};
}

}  // namespace tricount::graph
