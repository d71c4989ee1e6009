#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tricount/types.hpp"

namespace tricount::runtime {

/// Message kind. Values below kNumTags are valid; the named ones are used by
/// the algorithms, the rest are free for callers.
enum class Tag : std::uint8_t {
  degree = 0,
  neighborhood = 1,
  delta = 2,
  control = 3,
  amq = 4,
};

inline constexpr std::size_t kNumTags = 16;

/// Records are framed as [meta, length] followed by `length` payload words.
/// meta packs tag (8 bits), origin PE (28 bits) and final destination (28 bits).
inline constexpr std::size_t kHeaderWords = 2;
inline constexpr PeId kMaxPes = PeId{1} << 28;

auto tag_name(Tag tag) -> std::string_view;

struct RecordHeader {
  Tag tag = Tag::control;
  PeId origin = 0;
  PeId final_dst = 0;
  std::uint64_t length = 0;
};

/// A record as seen by a handler; the payload aliases the envelope.
struct RecordView {
  Tag tag = Tag::control;
  PeId origin = 0;
  PeId final_dst = 0;
  std::span<Word const> payload;
};

void append_record(std::vector<Word>& buffer, RecordHeader const& header, std::span<Word const> payload);

/// Calls `on_record(RecordView)` for every record in a framed buffer.
template <typename OnRecord>
void for_each_record(std::span<Word const> framed, OnRecord&& on_record) {
  std::size_t pos = 0;
  while (pos < framed.size()) {
    if (framed.size() - pos < kHeaderWords) {
      fail(ErrorKind::protocol, "truncated record header");
    }
    Word const meta = framed[pos];
    std::uint64_t const length = framed[pos + 1];
    pos += kHeaderWords;
    if (framed.size() - pos < length) {
      fail(ErrorKind::protocol, "truncated record payload");
    }
    RecordView const view{
        static_cast<Tag>(meta & 0xFFU),
        static_cast<PeId>((meta >> 8) & (kMaxPes - 1)),
        static_cast<PeId>((meta >> 36) & (kMaxPes - 1)),
        framed.subspan(pos, length),
    };
    on_record(view);
    pos += length;
  }
}

/// Unit handed to the transport: one or more framed records from src to dst.
struct Envelope {
  PeId src = 0;
  PeId dst = 0;
  std::vector<Word> words;
  std::size_t records = 0;
  std::size_t payload_words = 0;
};

}  // namespace tricount::runtime
