#include "tricount/routing/grid.hpp"

#include <string>

namespace tricount::routing {

namespace {

auto isqrt(std::uint64_t x) -> std::uint64_t {
  std::uint64_t r = 0;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

auto grid_shape(PeId p) -> GridShape {
  if (p == 0) {
    fail(ErrorKind::parameter, "grid needs at least one PE");
  }
  // floor(sqrt(p) + 1/2) in integers: sqrt(p) >= c + 1/2 iff p > c^2 + c.
  std::uint64_t const c = isqrt(p);
  auto const cols = static_cast<PeId>(p - c * c > c ? c + 1 : c);
  auto const rows = static_cast<PeId>((p + cols - 1) / cols);
  return {p, cols, rows};
}

auto proxy_of(PeId src, PeId dst, GridShape const& shape) -> PeId {
  GridPos const s = position(src, shape);
  GridPos const d = position(dst, shape);
  PeId const proxy = pe_at({s.row, d.col}, shape);
  if (proxy < shape.num_pes) {
    return proxy;
  }
  // src is in the ragged last row: its virtual position is (s.col, cols).
  return pe_at({s.col, d.col}, shape);
}

auto route(PeId src, PeId dst, GridShape const& shape) -> Route {
  PeId const proxy = proxy_of(src, dst, shape);
  if (proxy == src || proxy == dst) {
    return Route(dst);
  }
  return Route(proxy, dst);
}

}  // namespace tricount::routing
