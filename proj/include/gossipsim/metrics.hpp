#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gossipsim/messages.hpp"
#include "gossipsim/time.hpp"

namespace gossipsim {

// Why a data transfer was initiated; IWANT replies stay attributable in
// the duplicate accounting.
enum class SendTag : std::uint8_t { Publish, Eager, Push, IwantReply };

enum class ByteCategory : std::uint8_t {
  Data,
  DataDuplicate,
  IwantReply,
  Ihave,
  Iwant,
  Idontwant,
  Preamble,
  Imreceiving,
};
constexpr std::size_t kByteCategoryCount = 8;
const char* byte_category_name(ByteCategory c);

enum class TraceKind : std::uint8_t {
  Publish,
  SendData,
  SendControl,
  DeliverFirst,
  DeliverDuplicate,
  DeliverControl,
  StallTimeout,
};

struct TraceEvent {
  SimTime time = 0;
  TraceKind kind = TraceKind::Publish;
  NodeId a = 0;  // source / acting node
  NodeId b = 0;  // destination / peer
  MsgId msg = 0;
  std::uint64_t extra = 0;
};

struct MessageStats {
  MsgId id = 0;
  NodeId publisher = 0;
  std::uint64_t size = 0;
  SimTime publish_time = 0;
  bool warmup = false;
  // Includes the publisher itself at publish_time.
  std::unordered_map<NodeId, SimTime> first_delivery;
  std::unordered_map<NodeId, std::uint32_t> duplicates;
  std::uint64_t duplicate_total = 0;
  std::uint64_t duplicates_via_iwant_reply = 0;
};

struct TemporalSpreadRow {
  MsgId id = 0;
  SimTime dissemination_time = 0;
  std::vector<std::uint32_t> bins;  // first deliveries per interval
};

// Per-run counters and per-message delivery records. Everything here is
// observational; the protocol never reads metrics back.
class Metrics {
 public:
  void set_n_nodes(std::uint32_t n) { n_nodes_ = n; }
  std::uint32_t n_nodes() const { return n_nodes_; }

  void enable_trace(bool on) { record_trace_ = on; }

  void register_message(const DataMessage& m, SimTime publish_time);
  void record_send_bytes(ByteCategory c, std::uint64_t bytes);
  void record_first_delivery(MsgId id, NodeId node, SimTime t);
  void record_duplicate(MsgId id, NodeId node, std::uint64_t wire_bytes,
                        bool via_iwant_reply);
  void record_iwant_requests(std::uint64_t n) { iwant_requests_ += n; }
  void record_stall_timeout(NodeId victim, NodeId peer) {
    stall_timeouts_.emplace_back(victim, peer);
  }
  void record_invariant_violation() { ++invariant_violations_; }
  void trace(TraceKind kind, NodeId a, NodeId b, MsgId msg, SimTime t,
             std::uint64_t extra = 0);

  // Queries -----------------------------------------------------------
  std::uint64_t total_bytes() const;  // B_N, control plus data
  std::uint64_t bytes(ByteCategory c) const {
    return bytes_[static_cast<std::size_t>(c)];
  }
  std::uint64_t iwant_requests() const { return iwant_requests_; }
  std::uint64_t invariant_violations() const { return invariant_violations_; }

  const std::vector<MessageStats>& messages() const { return messages_; }
  const MessageStats& message(MsgId id) const;
  bool has_message(MsgId id) const { return index_.count(id) > 0; }

  double coverage(const MessageStats& m) const;
  bool full_coverage() const;  // every message delivered everywhere
  std::optional<SimTime> dissemination_time(const MessageStats& m) const;

  // Mean dissemination time over non-warmup messages; empty if any
  // non-warmup message is short of full coverage.
  std::optional<double> latency_l_cov_ms() const;
  // d_bar = (1/NM) * sum_j sum_i d_ij over non-warmup messages.
  double avg_duplicates() const;
  // Fraction of non-warmup duplicates that arrived as IWANT replies.
  double iwant_reply_share() const;

  std::vector<TemporalSpreadRow> temporal_spread(SimTime bin = 100 * kMs) const;
  std::vector<std::string> shortfall_report() const;

  const std::vector<std::pair<NodeId, NodeId>>& stall_timeouts() const {
    return stall_timeouts_;
  }
  std::uint64_t trace_hash() const { return trace_hash_; }
  const std::vector<TraceEvent>& trace_log() const { return trace_; }

 private:
  MessageStats& stats_for(MsgId id);

  std::uint32_t n_nodes_ = 0;
  std::array<std::uint64_t, kByteCategoryCount> bytes_{};
  std::vector<MessageStats> messages_;
  std::unordered_map<MsgId, std::size_t> index_;
  std::uint64_t iwant_requests_ = 0;
  std::uint64_t invariant_violations_ = 0;
  std::vector<std::pair<NodeId, NodeId>> stall_timeouts_;
  std::uint64_t trace_hash_ = 1469598103934665603ULL;  // FNV offset basis
  bool record_trace_ = false;
  std::vector<TraceEvent> trace_;
};

}  // namespace gossipsim
