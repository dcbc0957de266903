#pragma once
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gossipsim/time.hpp"

namespace gossipsim {

// Message identity is (publisher, seq_no), packed into 64 bits for map
// keys. On the wire an id is accounted as 40 bytes.
using MsgId = std::uint64_t;

inline MsgId make_msg_id(NodeId publisher, std::uint32_t seq_no) {
  return (static_cast<std::uint64_t>(publisher) << 32) | seq_no;
}
inline NodeId msg_publisher(MsgId id) { return static_cast<NodeId>(id >> 32); }
inline std::uint32_t msg_seq(MsgId id) {
  return static_cast<std::uint32_t>(id & 0xffffffffu);
}

struct DataMessage {
  MsgId id = 0;
  std::uint64_t length = 0;  // declared payload bytes
  NodeId publisher = 0;
  std::uint32_t seq_no = 0;
  bool is_warmup = false;
};

struct IHave {
  std::vector<MsgId> ids;
};
struct IWant {
  std::vector<MsgId> ids;
};
struct IDontWant {
  MsgId id = 0;
};
// PREAMBLE and IMRECEIVING both carry (id, length); the pair acts as the
// message descriptor, so a sender cannot misrepresent the length later.
struct Preamble {
  MsgId id = 0;
  std::uint64_t length = 0;
};
struct ImReceiving {
  MsgId id = 0;
  std::uint64_t length = 0;
};

using ControlMessage =
    std::variant<IHave, IWant, IDontWant, Preamble, ImReceiving>;

// Fixed wire-size accounting so bandwidth totals include control
// overhead. All sizes are config-overridable.
struct WireSizes {
  std::uint64_t data_header = 24;
  std::uint64_t ihave_base = 8;
  std::uint64_t iwant_base = 8;
  std::uint64_t per_msg_id = 40;
  std::uint64_t idontwant = 48;
  std::uint64_t preamble = 56;
  std::uint64_t imreceiving = 56;

  std::uint64_t data_size(std::uint64_t length) const {
    return length + data_header;
  }
  std::uint64_t control_size(const ControlMessage& m) const {
    if (const auto* h = std::get_if<IHave>(&m)) {
      return ihave_base + per_msg_id * h->ids.size();
    }
    if (const auto* w = std::get_if<IWant>(&m)) {
      return iwant_base + per_msg_id * w->ids.size();
    }
    if (std::holds_alternative<IDontWant>(m)) return idontwant;
    if (std::holds_alternative<Preamble>(m)) return preamble;
    return imreceiving;
  }
};

// Run-wide registry of published messages; nodes hold ids and look up
// lengths here once they legitimately know the message.
class MessageTable {
 public:
  void add(const DataMessage& m) { msgs_.emplace(m.id, m); }
  const DataMessage& get(MsgId id) const {
    auto it = msgs_.find(id);
    if (it == msgs_.end()) throw std::logic_error("unknown message id");
    return it->second;
  }
  bool contains(MsgId id) const { return msgs_.count(id) > 0; }
  std::size_t size() const { return msgs_.size(); }

 private:
  std::unordered_map<MsgId, DataMessage> msgs_;
};

}  // namespace gossipsim
