#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace tricount {

using VertexId = std::uint64_t;
using PeId = std::uint32_t;
using Degree = std::uint64_t;
using Word = std::uint64_t;

/// Undirected edge; normalized edges satisfy first < second.
using Edge = std::pair<VertexId, VertexId>;

/// Categories used by the CLI to pick an exit status.
enum class ErrorKind {
  parameter,
  missing_degree,
  foreign_edge,
  mode,
  out_of_range,
  size,
  parse,
  io,
  dispatch,
  protocol,
  livelock,
  collective,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string const& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] auto kind() const noexcept -> ErrorKind { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string const& what) { throw Error(kind, what); }

}  // namespace tricount
