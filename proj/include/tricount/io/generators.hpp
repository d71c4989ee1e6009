#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::io {

enum class Family { gnm, rgg2d, rmat };

struct RmatProbabilities {
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
};

struct GeneratorSpec {
  Family family = Family::gnm;
  /// Vertex count (gnm, rgg2d). For rmat, 2^scale.
  VertexId n = 0;
  /// Exact edge count for gnm; defaults to edgefactor * n.
  std::optional<std::uint64_t> m;
  double edgefactor = 16.0;
  std::uint64_t seed = 0;
  /// rgg2d: explicit radius instead of one derived from the edge factor.
  std::optional<double> radius;
  unsigned scale = 0;
  RmatProbabilities probabilities;
};

/// Parses "family=gnm,n=65536,m=1048576,seed=42". Keys: family, n, m, ef,
/// seed, r, scale, a, b, c, d.
auto parse_generator_spec(std::string_view text) -> GeneratorSpec;
auto to_string(GeneratorSpec const& spec) -> std::string;
auto family_name(Family f) -> std::string_view;

/// Runs the generator; output edges are simple and satisfy first < second.
auto generate(GeneratorSpec const& spec) -> std::vector<Edge>;

/// m distinct edges drawn uniformly from all C(n, 2) pairs.
auto gen_gnm(VertexId n, std::uint64_t m, std::uint64_t seed) -> std::vector<Edge>;

/// Radius giving E[m] = edgefactor * n on the unit square, ignoring
/// boundary effects: C(n, 2) * pi * r^2 = edgefactor * n.
auto rgg_radius(VertexId n, double edgefactor) -> double;

/// Unit-square geometric graph; vertices adjacent when closer than `radius`.
/// Ids follow the Z-order of the points, so id ranges are spatially compact.
auto gen_rgg2d(VertexId n, double radius, std::uint64_t seed) -> std::vector<Edge>;

/// edgefactor * 2^scale recursive-descent samples, reduced to simple edges.
auto gen_rmat(unsigned scale, double edgefactor, RmatProbabilities const& probs, std::uint64_t seed)
    -> std::vector<Edge>;

/// Platform-independent draws on top of std::mt19937_64.
auto uniform_below(std::mt19937_64& rng, std::uint64_t bound) -> std::uint64_t;
auto uniform_unit(std::mt19937_64& rng) -> double;

}  // namespace tricount::io
