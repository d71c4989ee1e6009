#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "tricount/types.hpp"

namespace tricount::routing {

/// Logical PE grid with round(sqrt(p)) columns, numbered row-major. The last
/// row may be partially filled.
struct GridShape {
  PeId num_pes = 1;
  PeId cols = 1;
  PeId rows = 1;

  /// Number of PEs in the last row, in [1, cols].
  [[nodiscard]] auto last_row_size() const noexcept -> PeId { return num_pes - (rows - 1) * cols; }
  friend auto operator==(GridShape const&, GridShape const&) -> bool = default;
};

struct GridPos {
  PeId row = 0;
  PeId col = 0;
  friend auto operator==(GridPos const&, GridPos const&) -> bool = default;
};

auto grid_shape(PeId p) -> GridShape;

inline auto position(PeId pe, GridShape const& shape) -> GridPos { return {pe / shape.cols, pe % shape.cols}; }
inline auto pe_at(GridPos pos, GridShape const& shape) -> PeId { return pos.row * shape.cols + pos.col; }

/// Proxy on the path src -> dst: the PE in src's row and dst's column. If src
/// sits in a ragged last row and that PE does not exist, the last row is
/// treated as an extra column appended on the right (PE in column j of the
/// last row acts as row j) and the proxy is taken along that virtual row.
/// Equals src when both share a column and dst when both share a row.
auto proxy_of(PeId src, PeId dst, GridShape const& shape) -> PeId;

/// One or two hops ending at dst.
class Route {
 public:
  Route(PeId dst) : hops_{dst, dst}, size_(1) {}  // NOLINT(google-explicit-constructor)
  Route(PeId proxy, PeId dst) : hops_{proxy, dst}, size_(2) {}

  [[nodiscard]] auto hops() const noexcept -> std::span<PeId const> { return {hops_.data(), size_}; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return size_; }
  [[nodiscard]] auto first() const noexcept -> PeId { return hops_[0]; }
  [[nodiscard]] auto last() const noexcept -> PeId { return hops_[size_ - 1]; }

 private:
  std::array<PeId, 2> hops_;
  std::size_t size_;
};

auto route(PeId src, PeId dst, GridShape const& shape) -> Route;

}  // namespace tricount::routing
