#pragma once
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gossipsim/kernel.hpp"
#include "gossipsim/messages.hpp"
#include "gossipsim/metrics.hpp"
#include "gossipsim/params.hpp"
#include "gossipsim/random.hpp"
#include "gossipsim/transport.hpp"

namespace gossipsim {

struct OngoingReceive {
  MsgId id = 0;
  std::uint64_t length = 0;
  NodeId from = 0;
  SimTime started_at = 0;
  SimTime deadline = 0;
  SimKernel::EventHandle timeout;
};

struct OutstandingIwant {
  NodeId peer = 0;
  SimTime deadline = 0;
  SimKernel::EventHandle timeout;
};

// Per-node GossipSub state machine. All four variants share one handler
// set; variant checks gate the added machinery, and everything above
// v1.1 applies to large messages only.
class Node {
 public:
  Node(NodeId id, ProtocolVariant variant, const MeshParams& mesh,
       const ProtocolConfig& cfg, RandomSource rng, SimKernel& kernel,
       Transport& transport, Metrics& metrics, MessageTable& table);

  void set_peers(std::vector<NodeId> mesh_peers,
                 std::vector<NodeId> non_mesh_peers);
  void set_adversary(AdversaryKind kind) { adversary_ = kind; }
  AdversaryKind adversary() const { return adversary_; }

  void start_heartbeat();
  void publish(const DataMessage& msg);
  void handle_data(NodeId from, MsgId id, SendTag tag);
  void handle_control(NodeId from, const ControlMessage& msg);
  // Checked by the transport when an eager transfer reaches the head of
  // the uplink queue.
  bool should_drop_send(NodeId dst, MsgId id) const;

  // Observability ----------------------------------------------------
  NodeId id() const { return id_; }
  const std::vector<NodeId>& mesh_peers() const { return mesh_; }
  const std::vector<NodeId>& non_mesh() const { return non_mesh_; }
  bool has_seen(MsgId id) const { return seen_.count(id) > 0; }
  bool holds(MsgId id) const { return cache_.count(id) > 0; }
  bool receiving(MsgId id) const { return ongoing_.count(id) > 0; }
  const std::map<NodeId, double>& scores() const { return scores_; }
  std::size_t outstanding_iwants(MsgId id) const;
  bool in_dont_send(MsgId id, NodeId peer) const;
  std::uint32_t eager_sends(MsgId id) const;
  std::uint32_t immediate_ihaves(MsgId id) const;

  SimTime estimate_transfer_duration(std::uint64_t length, NodeId peer) const;
  static std::vector<NodeId> select_forward_targets(
      const std::vector<NodeId>& eligible, std::size_t k, RandomSource& rng);

 private:
  bool is_large(std::uint64_t length) const {
    return length > mesh_params_.large_threshold;
  }
  bool with_preamble(std::uint64_t length) const {
    return variant_ == ProtocolVariant::V1_4 && is_large(length);
  }
  void forward_message(MsgId id, std::uint64_t length, NodeId from);
  void send_idontwants(MsgId id, NodeId from);
  void on_preamble(NodeId from, const Preamble& p);
  void on_imreceiving(NodeId from, const ImReceiving& m);
  void on_idontwant(NodeId from, MsgId id);
  void on_ihave(NodeId from, const std::vector<MsgId>& ids);
  void on_iwant(NodeId from, const std::vector<MsgId>& ids);
  void on_stall_timeout(MsgId id, NodeId from);
  void on_iwant_timeout(MsgId id, NodeId peer);
  void heartbeat_tick();
  void request_iwant(MsgId id, NodeId peer);
  void cancel_outstanding_iwants(MsgId id);
  void arm_push(MsgId id, std::uint64_t length, NodeId peer, SimTime deadline);
  void fire_push(MsgId id, NodeId peer);
  void add_dont_send(MsgId id, NodeId peer);
  std::uint64_t length_hint(MsgId id) const;
  int iwant_limit(MsgId id) const;
  void expire_caches();

  NodeId id_;
  ProtocolVariant variant_;
  MeshParams mesh_params_;
  ProtocolConfig cfg_;
  RandomSource rng_;
  SimKernel& kernel_;
  Transport& transport_;
  Metrics& metrics_;
  MessageTable& table_;
  AdversaryKind adversary_ = AdversaryKind::None;

  std::vector<NodeId> mesh_;
  std::vector<NodeId> non_mesh_;
  std::unordered_set<NodeId> mesh_set_;

  std::unordered_map<MsgId, SimTime> seen_;   // first-delivery times
  std::unordered_map<MsgId, SimTime> cache_;  // held payloads, by insert time
  std::unordered_map<MsgId, OngoingReceive> ongoing_;
  std::unordered_map<MsgId, std::unordered_set<NodeId>> dont_send_;
  std::unordered_map<MsgId, std::unordered_set<NodeId>> idw_received_;
  std::unordered_set<MsgId> imreceiving_sent_;
  std::unordered_map<MsgId, std::vector<OutstandingIwant>> outstanding_;
  std::unordered_map<MsgId, std::unordered_set<NodeId>> iwant_attempted_;
  std::unordered_map<MsgId, std::vector<NodeId>> advertisers_;
  std::unordered_map<MsgId, std::unordered_set<NodeId>> advertiser_set_;
  std::map<std::pair<MsgId, NodeId>, SimKernel::EventHandle> pending_push_;
  std::unordered_map<MsgId, std::vector<std::pair<NodeId, SimTime>>>
      push_intents_;
  std::unordered_map<MsgId, std::uint64_t> known_length_;
  std::map<NodeId, double> scores_;
  std::unordered_map<MsgId, std::uint32_t> eager_sends_;
  std::unordered_map<MsgId, std::uint32_t> immediate_ihaves_;
};

}  // namespace gossipsim
