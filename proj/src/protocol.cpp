#include "gossipsim/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace gossipsim {

Node::Node(NodeId id, ProtocolVariant variant, const MeshParams& mesh,
           const ProtocolConfig& cfg, RandomSource rng, SimKernel& kernel,
           Transport& transport, Metrics& metrics, MessageTable& table)
    : id_(id),
      variant_(variant),
      mesh_params_(mesh),
      cfg_(cfg),
      rng_(rng),
      kernel_(kernel),
      transport_(transport),
      metrics_(metrics),
      table_(table) {}

void Node::set_peers(std::vector<NodeId> mesh_peers,
                     std::vector<NodeId> non_mesh_peers) {
  mesh_ = std::move(mesh_peers);
  non_mesh_ = std::move(non_mesh_peers);
  mesh_set_.clear();
  mesh_set_.insert(mesh_.begin(), mesh_.end());
}

SimTime Node::estimate_transfer_duration(std::uint64_t length,
                                         NodeId /*peer*/) const {
  const double ser_us = static_cast<double>(length) * 8.0 * 1e6 /
                        static_cast<double>(cfg_.estimate_min_rate_bps);
  return static_cast<SimTime>(std::llround(cfg_.estimate_safety * ser_us)) +
         2 * cfg_.estimate_max_latency;
}

std::vector<NodeId> Node::select_forward_targets(
    const std::vector<NodeId>& eligible, std::size_t k, RandomSource& rng) {
  std::vector<NodeId> out = rng.sample(eligible, k);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Node::outstanding_iwants(MsgId id) const {
  auto it = outstanding_.find(id);
  return it == outstanding_.end() ? 0 : it->second.size();
}

bool Node::in_dont_send(MsgId id, NodeId peer) const {
  auto it = dont_send_.find(id);
  return it != dont_send_.end() && it->second.count(peer) > 0;
}

std::uint32_t Node::eager_sends(MsgId id) const {
  auto it = eager_sends_.find(id);
  return it == eager_sends_.end() ? 0 : it->second;
}

std::uint32_t Node::immediate_ihaves(MsgId id) const {
  auto it = immediate_ihaves_.find(id);
  return it == immediate_ihaves_.end() ? 0 : it->second;
}

bool Node::should_drop_send(NodeId dst, MsgId id) const {
  return in_dont_send(id, dst);
}

int Node::iwant_limit(MsgId id) const {
  // v1.4 and reduced forwarding restrict outstanding requests per large
  // message to one. The length becomes known through a PREAMBLE or an
  // IMRECEIVING; before that the node cannot distinguish large from small
  // and keeps the legacy allowance, preserving byte-for-byte equivalence
  // with v1.2 in runs that never cross the size threshold.
  if (variant_ == ProtocolVariant::V1_4 || variant_ == ProtocolVariant::Reduced) {
    auto it = known_length_.find(id);
    if (it != known_length_.end() && is_large(it->second)) return 1;
  }
  return cfg_.max_iwant_retries;
}

std::uint64_t Node::length_hint(MsgId id) const {
  auto it = known_length_.find(id);
  return it == known_length_.end() ? cfg_.iwant_assumed_length : it->second;
}

void Node::add_dont_send(MsgId id, NodeId peer) {
  dont_send_[id].insert(peer);
}

void Node::start_heartbeat() {
  const SimTime offset =
      static_cast<SimTime>(rng_.bounded(mesh_params_.heartbeat_interval));
  kernel_.schedule_in(offset, [this] { heartbeat_tick(); });
}

// ---------------------------------------------------------------------------
// Publishing and forwarding

void Node::publish(const DataMessage& msg) {
  if (!table_.contains(msg.id)) table_.add(msg);
  seen_[msg.id] = kernel_.now();
  cache_[msg.id] = kernel_.now();
  metrics_.register_message(msg, kernel_.now());
  metrics_.trace(TraceKind::Publish, id_, id_, msg.id, kernel_.now());

  std::vector<NodeId> base = mesh_;
  if (mesh_params_.flood_publish) {
    base.insert(base.end(), non_mesh_.begin(), non_mesh_.end());
    std::sort(base.begin(), base.end());
  }
  if (variant_ == ProtocolVariant::Reduced && is_large(msg.length)) {
    auto targets = select_forward_targets(
        base, static_cast<std::size_t>(mesh_params_.k_reduced), rng_);
    std::unordered_set<NodeId> chosen(targets.begin(), targets.end());
    for (NodeId p : base) {
      if (!chosen.count(p)) {
        transport_.send_control(id_, p, IHave{{msg.id}});
        ++immediate_ihaves_[msg.id];
      }
    }
    for (NodeId p : targets) {
      transport_.send_data(id_, p, msg.id, msg.length, with_preamble(msg.length),
                           SendTag::Publish);
      ++eager_sends_[msg.id];
    }
    return;
  }
  for (NodeId p : base) {
    transport_.send_data(id_, p, msg.id, msg.length, with_preamble(msg.length),
                         SendTag::Publish);
    ++eager_sends_[msg.id];
  }
}

void Node::send_idontwants(MsgId id, NodeId from) {
  const auto& excluded = dont_send_[id];
  for (NodeId p : mesh_) {
    if (p == from) continue;
    // Under v1.4 the IDONTWANT must reach every peer that may hold an
    // armed push timer, so the dont-send exclusion is not applied.
    if (variant_ != ProtocolVariant::V1_4 && excluded.count(p)) continue;
    transport_.send_control(id_, p, IDontWant{id});
  }
}

void Node::forward_message(MsgId id, std::uint64_t length, NodeId from) {
  const auto& excluded = dont_send_[id];
  std::vector<NodeId> eligible;
  for (NodeId p : mesh_) {
    if (p == from || excluded.count(p)) continue;
    eligible.push_back(p);
  }
  if (variant_ == ProtocolVariant::Reduced && is_large(length)) {
    auto targets = select_forward_targets(
        eligible, static_cast<std::size_t>(mesh_params_.k_reduced), rng_);
    std::unordered_set<NodeId> chosen(targets.begin(), targets.end());
    for (NodeId p : eligible) {
      if (!chosen.count(p)) {
        transport_.send_control(id_, p, IHave{{id}});
        ++immediate_ihaves_[id];
      }
    }
    for (NodeId p : targets) {
      transport_.send_data(id_, p, id, length, with_preamble(length),
                           SendTag::Eager);
      ++eager_sends_[id];
    }
    return;
  }
  for (NodeId p : eligible) {
    transport_.send_data(id_, p, id, length, with_preamble(length),
                         SendTag::Eager);
    ++eager_sends_[id];
  }
}

void Node::handle_data(NodeId from, MsgId id, SendTag tag) {
  const DataMessage& msg = table_.get(id);
  const std::uint64_t wire_bytes = transport_.wire().data_size(msg.length);
  if (seen_.count(id)) {
    metrics_.record_duplicate(id, id_, wire_bytes, tag == SendTag::IwantReply);
    metrics_.trace(TraceKind::DeliverDuplicate, from, id_, id, kernel_.now(),
                   static_cast<std::uint64_t>(tag));
    return;
  }
  const SimTime now = kernel_.now();
  seen_[id] = now;
  cache_[id] = now;
  metrics_.record_first_delivery(id, id_, now);
  metrics_.trace(TraceKind::DeliverFirst, from, id_, id, now,
                 static_cast<std::uint64_t>(tag));

  auto og = ongoing_.find(id);
  if (og != ongoing_.end()) {
    kernel_.cancel(og->second.timeout);
    ongoing_.erase(og);
  }
  cancel_outstanding_iwants(id);

  if (adversary_ == AdversaryKind::StallingPreamble && is_large(msg.length)) {
    // Commits to a transfer it will never perform.
    for (NodeId p : mesh_) {
      transport_.send_control(id_, p, Preamble{id, msg.length});
    }
    return;
  }

  if (is_large(msg.length) && variant_ != ProtocolVariant::V1_1) {
    send_idontwants(id, from);
  }
  forward_message(id, msg.length, from);

  // Pushes promised to peers whose IMRECEIVING preceded our own copy.
  auto pi = push_intents_.find(id);
  if (pi != push_intents_.end()) {
    for (const auto& [peer, deadline] : pi->second) {
      if (deadline > now && !idw_received_[id].count(peer)) {
        arm_push(id, msg.length, peer, deadline);
      }
    }
    push_intents_.erase(pi);
  }
}

// ---------------------------------------------------------------------------
// Control handlers

void Node::handle_control(NodeId from, const ControlMessage& msg) {
  metrics_.trace(TraceKind::DeliverControl, from, id_, 0, kernel_.now(),
                 static_cast<std::uint64_t>(msg.index()));
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IHave>) {
          on_ihave(from, m.ids);
        } else if constexpr (std::is_same_v<T, IWant>) {
          on_iwant(from, m.ids);
        } else if constexpr (std::is_same_v<T, IDontWant>) {
          on_idontwant(from, m.id);
        } else if constexpr (std::is_same_v<T, Preamble>) {
          on_preamble(from, m);
        } else {
          on_imreceiving(from, m);
        }
      },
      msg);
}

void Node::on_preamble(NodeId from, const Preamble& p) {
  known_length_[p.id] = p.length;
  if (seen_.count(p.id)) return;
  add_dont_send(p.id, from);
  if (ongoing_.count(p.id)) {
    // A second committed sender; the first commitment stands.
    return;
  }
  const SimTime now = kernel_.now();
  OngoingReceive rec;
  rec.id = p.id;
  rec.length = p.length;
  rec.from = from;
  rec.started_at = now;
  rec.deadline = now + estimate_transfer_duration(p.length, from);
  rec.timeout = kernel_.schedule_at(
      rec.deadline, [this, id = p.id, from] { on_stall_timeout(id, from); });
  ongoing_.emplace(p.id, std::move(rec));
  cancel_outstanding_iwants(p.id);

  if (variant_ == ProtocolVariant::V1_4 && !imreceiving_sent_.count(p.id)) {
    imreceiving_sent_.insert(p.id);
    kernel_.schedule_in(cfg_.preamble_delta,
                        [this, id = p.id, len = p.length, from] {
                          if (seen_.count(id)) return;
                          for (NodeId p2 : mesh_) {
                            if (p2 == from) continue;
                            transport_.send_control(id_, p2,
                                                    ImReceiving{id, len});
                          }
                        });
  }
}

void Node::on_imreceiving(NodeId from, const ImReceiving& m) {
  known_length_[m.id] = m.length;
  add_dont_send(m.id, from);
  if (!cfg_.push_fallback) return;
  if (adversary_ == AdversaryKind::StallingPreamble) return;
  const SimTime deadline =
      kernel_.now() + estimate_transfer_duration(m.length, from);
  if (cache_.count(m.id)) {
    arm_push(m.id, m.length, from, deadline);
    return;
  }
  auto& intents = push_intents_[m.id];
  for (const auto& [peer, d] : intents) {
    if (peer == from) return;
  }
  intents.emplace_back(from, deadline);
}

void Node::on_idontwant(NodeId from, MsgId id) {
  idw_received_[id].insert(from);
  add_dont_send(id, from);
  auto it = pending_push_.find({id, from});
  if (it != pending_push_.end()) {
    kernel_.cancel(it->second);
    pending_push_.erase(it);
  }
  auto pi = push_intents_.find(id);
  if (pi != push_intents_.end()) {
    auto& v = pi->second;
    v.erase(std::remove_if(v.begin(), v.end(),
                           [from](const auto& e) { return e.first == from; }),
            v.end());
  }
}

void Node::on_ihave(NodeId from, const std::vector<MsgId>& ids) {
  std::vector<MsgId> wants;
  for (MsgId id : ids) {
    if (!advertiser_set_[id].count(from)) {
      advertiser_set_[id].insert(from);
      advertisers_[id].push_back(from);
    }
    if (seen_.count(id) || ongoing_.count(id)) continue;
    const auto& out = outstanding_[id];
    if (out.size() >= static_cast<std::size_t>(iwant_limit(id))) continue;
    if (std::any_of(out.begin(), out.end(),
                    [from](const auto& e) { return e.peer == from; })) {
      continue;
    }
    if (iwant_attempted_[id].count(from)) continue;
    wants.push_back(id);
  }
  if (wants.empty()) return;
  for (MsgId id : wants) request_iwant(id, from);
  transport_.send_control(id_, from, IWant{wants});
}

void Node::request_iwant(MsgId id, NodeId peer) {
  OutstandingIwant e;
  e.peer = peer;
  e.deadline = kernel_.now() + estimate_transfer_duration(length_hint(id), peer);
  e.timeout = kernel_.schedule_at(
      e.deadline, [this, id, peer] { on_iwant_timeout(id, peer); });
  outstanding_[id].push_back(std::move(e));
  iwant_attempted_[id].insert(peer);
  metrics_.record_iwant_requests(1);
  // Observer-side assertion against the true length: under the restricted
  // variants no node may ever hold more than one outstanding request for a
  // message that is actually large, regardless of what it knows.
  if ((variant_ == ProtocolVariant::V1_4 ||
       variant_ == ProtocolVariant::Reduced) &&
      table_.contains(id) && is_large(table_.get(id).length) &&
      outstanding_[id].size() > 1) {
    metrics_.record_invariant_violation();
  }
}

void Node::cancel_outstanding_iwants(MsgId id) {
  auto it = outstanding_.find(id);
  if (it == outstanding_.end()) return;
  for (auto& e : it->second) kernel_.cancel(e.timeout);
  outstanding_.erase(it);
}

void Node::on_iwant(NodeId from, const std::vector<MsgId>& ids) {
  if (adversary_ == AdversaryKind::IwantSilent) return;
  for (MsgId id : ids) {
    if (!cache_.count(id)) continue;  // nothing cached, silently skipped
    const DataMessage& msg = table_.get(id);
    if (adversary_ == AdversaryKind::StallingPreamble && is_large(msg.length)) {
      continue;
    }
    // An explicit request overrides earlier suppression state.
    dont_send_[id].erase(from);
    transport_.send_data(id_, from, id, msg.length, with_preamble(msg.length),
                         SendTag::IwantReply);
  }
}

void Node::on_stall_timeout(MsgId id, NodeId from) {
  auto it = ongoing_.find(id);
  if (it == ongoing_.end() || it->second.from != from) return;
  scores_[from] += cfg_.penalty_stalled;
  metrics_.record_stall_timeout(id_, from);
  metrics_.trace(TraceKind::StallTimeout, id_, from, id, kernel_.now());
  ongoing_.erase(it);
  // Push-based recovery: mesh members armed by our IMRECEIVING deliver
  // the message; gossip IHAVEs cover the remainder.
}

void Node::on_iwant_timeout(MsgId id, NodeId peer) {
  auto it = outstanding_.find(id);
  if (it == outstanding_.end()) return;
  auto& v = it->second;
  v.erase(std::remove_if(v.begin(), v.end(),
                         [peer](const auto& e) { return e.peer == peer; }),
          v.end());
  if (v.empty()) outstanding_.erase(it);
  if (seen_.count(id) || ongoing_.count(id)) return;
  if (variant_ == ProtocolVariant::V1_4 || variant_ == ProtocolVariant::Reduced) {
    scores_[peer] += cfg_.penalty_iwant_ignored;
  }
  for (NodeId cand : advertisers_[id]) {
    if (iwant_attempted_[id].count(cand)) continue;
    request_iwant(id, cand);
    transport_.send_control(id_, cand, IWant{{id}});
    return;
  }
}

// ---------------------------------------------------------------------------
// Push fallback

void Node::arm_push(MsgId id, std::uint64_t length, NodeId peer,
                    SimTime deadline) {
  const auto key = std::make_pair(id, peer);
  if (pending_push_.count(key)) return;
  if (deadline <= kernel_.now()) return;
  pending_push_[key] = kernel_.schedule_at(
      deadline, [this, id, peer] { fire_push(id, peer); });
  (void)length;
}

void Node::fire_push(MsgId id, NodeId peer) {
  pending_push_.erase({id, peer});
  if (idw_received_[id].count(peer)) return;
  if (!cache_.count(id)) return;
  const DataMessage& msg = table_.get(id);
  if (adversary_ == AdversaryKind::StallingPreamble && is_large(msg.length)) {
    return;
  }
  // The dont-send entry came from the peer's IMRECEIVING; its silence
  // past the window is exactly the condition the push exists for.
  dont_send_[id].erase(peer);
  transport_.send_data(id_, peer, id, msg.length, with_preamble(msg.length),
                       SendTag::Push);
}

// ---------------------------------------------------------------------------
// Heartbeat

void Node::heartbeat_tick() {
  const SimTime now = kernel_.now();
  if (adversary_ != AdversaryKind::StallingPreamble && !non_mesh_.empty()) {
    const SimTime window =
        static_cast<SimTime>(cfg_.gossip_window_heartbeats) *
        mesh_params_.heartbeat_interval;
    std::vector<MsgId> recent;
    for (const auto& [id, inserted] : cache_) {
      if (now - inserted <= window) recent.push_back(id);
    }
    if (!recent.empty()) {
      std::sort(recent.begin(), recent.end());
      const std::size_t want = std::max<std::size_t>(
          static_cast<std::size_t>(mesh_params_.d_lazy),
          static_cast<std::size_t>(std::ceil(
              mesh_params_.gossip_factor * static_cast<double>(non_mesh_.size()))));
      auto targets = rng_.sample(non_mesh_, want);
      std::sort(targets.begin(), targets.end());
      for (NodeId t : targets) {
        transport_.send_control(id_, t, IHave{recent});
      }
    }
  }
  expire_caches();
  kernel_.schedule_in(mesh_params_.heartbeat_interval,
                      [this] { heartbeat_tick(); });
}

void Node::expire_caches() {
  const SimTime now = kernel_.now();
  std::vector<MsgId> dead;
  for (const auto& [id, inserted] : cache_) {
    if (now - inserted > cfg_.cache_ttl) dead.push_back(id);
  }
  for (MsgId id : dead) {
    cache_.erase(id);
    dont_send_.erase(id);
    idw_received_.erase(id);
    imreceiving_sent_.erase(id);
    known_length_.erase(id);
    advertisers_.erase(id);
    advertiser_set_.erase(id);
    iwant_attempted_.erase(id);
    push_intents_.erase(id);
  }
}

}  // namespace gossipsim
