#include "tricount/runtime/record.hpp"

namespace tricount::runtime {

auto tag_name(Tag tag) -> std::string_view {
  switch (tag) {
    case Tag::degree: return "degree";
    case Tag::neighborhood: return "neighborhood";
    case Tag::delta: return "delta";
    case Tag::control: return "control";
    case Tag::amq: return "amq";
  }
  return "user";
}

void append_record(std::vector<Word>& buffer, RecordHeader const& header, std::span<Word const> payload) {
  Word const meta = static_cast<Word>(header.tag) | (static_cast<Word>(header.origin) << 8) |
                    (static_cast<Word>(header.final_dst) << 36);
  buffer.push_back(meta);
  buffer.push_back(payload.size());
  buffer.insert(buffer.end(), payload.begin(), payload.end());
}

}  // namespace tricount::runtime
