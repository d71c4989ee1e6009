#include "tricount/io/generators.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "tricount/io/normalize.hpp"

namespace tricount::io {

namespace {

__extension__ using u128 = unsigned __int128;

auto pair_count(VertexId n) -> u128 { return static_cast<u128>(n) * (n - (n > 0 ? 1 : 0)) / 2; }

/// Number of pairs (u, v), u < v, whose first element is below `u`.
auto pairs_before(VertexId u, VertexId n) -> u128 {
  return static_cast<u128>(u) * (2 * static_cast<u128>(n) - u - 1) / 2;
}

/// Inverse of the row-major enumeration of pairs u < v.
auto decode_pair(std::uint64_t index, VertexId n) -> Edge {
  VertexId lo = 0;
  VertexId hi = n - 1;
  while (lo < hi) {
    VertexId const mid = lo + (hi - lo + 1) / 2;
    if (pairs_before(mid, n) <= index) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  auto const offset = static_cast<std::uint64_t>(index - pairs_before(lo, n));
  return {lo, lo + 1 + offset};
}

auto interleave(std::uint32_t x) -> std::uint64_t {
  std::uint64_t v = x;
  v = (v | (v << 16)) & 0x0000FFFF0000FFFFULL;
  v = (v | (v << 8)) & 0x00FF00FF00FF00FFULL;
  v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0FULL;
  v = (v | (v << 2)) & 0x3333333333333333ULL;
  v = (v | (v << 1)) & 0x5555555555555555ULL;
  return v;
}

auto morton(double x, double y) -> std::uint64_t {
  constexpr double kScale = 4294967295.0;
  auto const qx = static_cast<std::uint32_t>(std::clamp(x, 0.0, 1.0) * kScale);
  auto const qy = static_cast<std::uint32_t>(std::clamp(y, 0.0, 1.0) * kScale);
  return interleave(qx) | (interleave(qy) << 1);
}

auto parse_u64(std::string_view key, std::string_view value) -> std::uint64_t {
  std::uint64_t out = 0;
  auto const [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(ErrorKind::parameter, "generator key '" + std::string(key) + "' expects an integer, got '" +
                                   std::string(value) + "'");
  }
  return out;
}

auto parse_double(std::string_view key, std::string_view value) -> double {
  std::string const text(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(text, &used);
  } catch (std::exception const&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    fail(ErrorKind::parameter, "generator key '" + std::string(key) + "' expects a number, got '" + text + "'");
  }
  return out;
}

auto format_double(double x) -> std::string {
  std::array<char, 32> buf{};
  auto const [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

void check_probabilities(RmatProbabilities const& p) {
  bool const nonnegative = p.a >= 0 && p.b >= 0 && p.c >= 0 && p.d >= 0;
  if (!nonnegative || std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9) {
    fail(ErrorKind::parameter, "R-MAT probabilities must be non-negative and sum to 1");
  }
}

}  // namespace

auto uniform_below(std::mt19937_64& rng, std::uint64_t bound) -> std::uint64_t {
  if (bound == 0) {
    fail(ErrorKind::parameter, "uniform_below: empty range");
  }
  // Reject the top partial block so every residue is equally likely.
  std::uint64_t const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

auto uniform_unit(std::mt19937_64& rng) -> double { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

auto family_name(Family f) -> std::string_view {
  switch (f) {
    case Family::gnm: return "gnm";
    case Family::rgg2d: return "rgg2d";
    case Family::rmat: return "rmat";
  }
  return "unknown";
}

auto parse_generator_spec(std::string_view text) -> GeneratorSpec {
  GeneratorSpec spec;
  bool has_family = false;
  bool has_n = false;
  while (!text.empty()) {
    auto const comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto const eq = item.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::parameter, "generator item '" + std::string(item) + "' is not key=value");
    }
    std::string_view const key = item.substr(0, eq);
    std::string_view const value = item.substr(eq + 1);
    if (key == "family") {
      if (value == "gnm") spec.family = Family::gnm;
      else if (value == "rgg2d" || value == "rgg") spec.family = Family::rgg2d;
      else if (value == "rmat") spec.family = Family::rmat;
      else fail(ErrorKind::parameter, "unknown generator family '" + std::string(value) + "'");
      has_family = true;
    } else if (key == "n") {
      spec.n = parse_u64(key, value);
      has_n = true;
    } else if (key == "m") {
      spec.m = parse_u64(key, value);
    } else if (key == "ef" || key == "edgefactor") {
      spec.edgefactor = parse_double(key, value);
    } else if (key == "seed") {
      spec.seed = parse_u64(key, value);
    } else if (key == "r" || key == "radius") {
      spec.radius = parse_double(key, value);
    } else if (key == "scale") {
      spec.scale = static_cast<unsigned>(parse_u64(key, value));
    } else if (key == "a") {
      spec.probabilities.a = parse_double(key, value);
    } else if (key == "b") {
      spec.probabilities.b = parse_double(key, value);
    } else if (key == "c") {
      spec.probabilities.c = parse_double(key, value);
    } else if (key == "d") {
      spec.probabilities.d = parse_double(key, value);
    } else {
      fail(ErrorKind::parameter, "unknown generator key '" + std::string(key) + "'");
    }
  }
  if (!has_family) {
    fail(ErrorKind::parameter, "generator spec needs family=gnm|rgg2d|rmat");
  }
  if (spec.family == Family::rmat) {
    if (spec.scale == 0 && has_n) {
      if (!std::has_single_bit(spec.n)) fail(ErrorKind::parameter, "rmat needs n to be a power of two");
      spec.scale = static_cast<unsigned>(std::countr_zero(spec.n));
    }
    if (spec.scale == 0 || spec.scale > 40) fail(ErrorKind::parameter, "rmat needs 1 <= scale <= 40");
    spec.n = VertexId{1} << spec.scale;
    check_probabilities(spec.probabilities);
  } else if (!has_n) {
    fail(ErrorKind::parameter, "generator spec needs n");
  }
  if (!(spec.edgefactor > 0.0)) {
    fail(ErrorKind::parameter, "edge factor must be positive");
  }
  return spec;
}

auto to_string(GeneratorSpec const& spec) -> std::string {
  std::string out = "family=" + std::string(family_name(spec.family));
  if (spec.family == Family::rmat) {
    auto const& p = spec.probabilities;
    out += ",scale=" + std::to_string(spec.scale) + ",ef=" + format_double(spec.edgefactor) +
           ",a=" + format_double(p.a) + ",b=" + format_double(p.b) + ",c=" + format_double(p.c) +
           ",d=" + format_double(p.d);
  } else {
    out += ",n=" + std::to_string(spec.n);
    out += spec.m ? ",m=" + std::to_string(*spec.m) : ",ef=" + format_double(spec.edgefactor);
    if (spec.radius) out += ",r=" + format_double(*spec.radius);
  }
  out += ",seed=" + std::to_string(spec.seed);
  return out;
}

auto generate(GeneratorSpec const& spec) -> std::vector<Edge> {
  switch (spec.family) {
    case Family::gnm: {
      auto const m = spec.m.value_or(static_cast<std::uint64_t>(std::llround(spec.edgefactor * spec.n)));
      return gen_gnm(spec.n, m, spec.seed);
    }
    case Family::rgg2d:
      return gen_rgg2d(spec.n, spec.radius.value_or(rgg_radius(spec.n, spec.edgefactor)), spec.seed);
    case Family::rmat:
      return gen_rmat(spec.scale, spec.edgefactor, spec.probabilities, spec.seed);
  }
  fail(ErrorKind::parameter, "unknown generator family");
}

auto gen_gnm(VertexId n, std::uint64_t m, std::uint64_t seed) -> std::vector<Edge> {
  u128 const total = pair_count(n);
  if (m > total) {
    fail(ErrorKind::parameter, "gnm: m = " + std::to_string(m) + " exceeds the number of vertex pairs");
  }
  if (m == 0) return {};
  auto const pairs = static_cast<std::uint64_t>(total);
  std::mt19937_64 rng(seed);
  // Floyd's sampling of m distinct indices from [0, pairs).
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m * 2);
  for (std::uint64_t j = pairs - m; j < pairs; ++j) {
    std::uint64_t const t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) {
      chosen.insert(j);
    }
  }
  std::vector<std::uint64_t> indices(chosen.begin(), chosen.end());
  std::sort(indices.begin(), indices.end());
  std::vector<Edge> edges;
  edges.reserve(m);
  for (auto const index : indices) {
    edges.push_back(decode_pair(index, n));
  }
  return edges;
}

auto rgg_radius(VertexId n, double edgefactor) -> double {
  if (n < 2) return 0.0;
  double const pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return std::sqrt(edgefactor * static_cast<double>(n) / (pairs * std::numbers::pi));
}

auto gen_rgg2d(VertexId n, double radius, std::uint64_t seed) -> std::vector<Edge> {
  if (!(radius >= 0.0) || radius > std::numbers::sqrt2) {
    fail(ErrorKind::parameter, "rgg2d radius must lie in [0, sqrt(2)]");
  }
  std::mt19937_64 rng(seed);
  struct Point {
    double x;
    double y;
    std::uint64_t code;
    VertexId draw;
  };
  std::vector<Point> points(n);
  for (VertexId i = 0; i < n; ++i) {
    double const x = uniform_unit(rng);
    double const y = uniform_unit(rng);
    points[i] = {x, y, morton(x, y), i};
  }
  std::sort(points.begin(), points.end(),
            [](Point const& a, Point const& b) { return a.code != b.code ? a.code < b.code : a.draw < b.draw; });
  if (n < 2 || radius == 0.0) return {};

  // Bucket into square cells of side >= radius; neighbors lie in the 3x3 block.
  auto const cells_per_side = static_cast<std::size_t>(
      std::clamp(std::floor(1.0 / radius), 1.0, std::max(1.0, std::ceil(std::sqrt(static_cast<double>(n))))));
  auto const cell_of = [&](double c) {
    return std::min(cells_per_side - 1, static_cast<std::size_t>(c * static_cast<double>(cells_per_side)));
  };
  std::vector<std::vector<VertexId>> cells(cells_per_side * cells_per_side);
  for (VertexId id = 0; id < n; ++id) {
    cells[cell_of(points[id].y) * cells_per_side + cell_of(points[id].x)].push_back(id);
  }
  double const r2 = radius * radius;
  std::vector<Edge> edges;
  for (std::size_t cy = 0; cy < cells_per_side; ++cy) {
    for (std::size_t cx = 0; cx < cells_per_side; ++cx) {
      for (VertexId u : cells[cy * cells_per_side + cx]) {
        for (std::size_t ny = cy == 0 ? 0 : cy - 1; ny <= std::min(cy + 1, cells_per_side - 1); ++ny) {
          for (std::size_t nx = cx == 0 ? 0 : cx - 1; nx <= std::min(cx + 1, cells_per_side - 1); ++nx) {
            for (VertexId v : cells[ny * cells_per_side + nx]) {
              if (v <= u) continue;
              double const dx = points[u].x - points[v].x;
              double const dy = points[u].y - points[v].y;
              if (dx * dx + dy * dy < r2) edges.emplace_back(u, v);
            }
          }
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

auto gen_rmat(unsigned scale, double edgefactor, RmatProbabilities const& probs, std::uint64_t seed)
    -> std::vector<Edge> {
  check_probabilities(probs);
  if (scale == 0 || scale > 40) fail(ErrorKind::parameter, "rmat needs 1 <= scale <= 40");
  if (!(edgefactor > 0.0)) fail(ErrorKind::parameter, "edge factor must be positive");
  auto const samples = static_cast<std::uint64_t>(std::llround(edgefactor * std::ldexp(1.0, static_cast<int>(scale))));
  std::mt19937_64 rng(seed);
  double const ab = probs.a + probs.b;
  double const abc = ab + probs.c;
  std::vector<Edge> raw;
  raw.reserve(samples);
  for (std::uint64_t s = 0; s < samples; ++s) {
    VertexId u = 0;
    VertexId v = 0;
    for (unsigned level = 0; level < scale; ++level) {
      VertexId const bit = VertexId{1} << (scale - 1 - level);
      double const r = uniform_unit(rng);
      if (r >= abc) {
        u |= bit;
        v |= bit;
      } else if (r >= ab) {
        u |= bit;
      } else if (r >= probs.a) {
        v |= bit;
      }
    }
    raw.emplace_back(u, v);
  }
  return simplify(std::move(raw));
}

}  // namespace tricount::io
