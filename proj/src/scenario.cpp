#include "gossipsim/scenario.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace gossipsim {

namespace {
// Fixed salts so the independent random streams never interleave.
constexpr std::uint64_t kSaltTopology = 1;
constexpr std::uint64_t kSaltClasses = 2;
constexpr std::uint64_t kSaltSchedule = 3;
constexpr std::uint64_t kSaltAdversary = 4;
constexpr std::uint64_t kSaltNodeBase = 0x100;
}  // namespace

void ScenarioConfig::validate() const {
  mesh.validate();
  adversary.validate();
  if (n_nodes <= static_cast<std::uint32_t>(mesh.d)) {
    throw std::invalid_argument("scenario: need n_nodes > d");
  }
  if (n_publishers == 0 || n_publishers > n_nodes) {
    throw std::invalid_argument("scenario: n_publishers in [1, n_nodes]");
  }
  if (n_messages == 0) {
    throw std::invalid_argument("scenario: n_messages >= 1");
  }
  if (message_size_bytes == 0) {
    throw std::invalid_argument("scenario: message_size_bytes >= 1");
  }
  if (bandwidth_classes.empty() || latency_classes.empty()) {
    throw std::invalid_argument("scenario: class lists must be non-empty");
  }
  for (auto r : bandwidth_classes) {
    if (r <= 0) throw std::invalid_argument("scenario: bandwidth must be > 0");
  }
  for (auto l : latency_classes) {
    if (l < 0) throw std::invalid_argument("scenario: latency must be >= 0");
  }
  if (inter_message_delay < 0 || publish_start < 0 || run_limit <= 0 ||
      drain_grace < 0) {
    throw std::invalid_argument("scenario: negative timing parameter");
  }
}

Simulation::Simulation(ScenarioConfig cfg)
    : cfg_(std::move(cfg)),
      root_rng_(cfg_.seed),
      transport_(kernel_, metrics_, cfg_.wire, cfg_.cwnd) {
  cfg_.validate();
  auto topo_rng = root_rng_.derive(kSaltTopology);
  topo_ = build_topology(cfg_.n_nodes, cfg_.mesh, topo_rng);
  auto class_rng = root_rng_.derive(kSaltClasses);
  links_ = assign_link_classes(topo_, cfg_.bandwidth_classes,
                               cfg_.latency_classes, class_rng);
  wire_up();
}

Simulation::Simulation(ScenarioConfig cfg, Topology topo, LinkAssignment links)
    : cfg_(std::move(cfg)),
      root_rng_(cfg_.seed),
      topo_(std::move(topo)),
      links_(std::move(links)),
      transport_(kernel_, metrics_, cfg_.wire, cfg_.cwnd) {
  cfg_.validate();
  if (topo_.size() != cfg_.n_nodes) {
    throw std::invalid_argument("scenario: topology size != n_nodes");
  }
  wire_up();
}

void Simulation::wire_up() {
  const std::uint32_t n = cfg_.n_nodes;
  metrics_.set_n_nodes(n);
  metrics_.enable_trace(cfg_.trace);

  for (NodeId i = 0; i < n; ++i) {
    transport_.add_node(i, links_.node_rate_bps[i]);
  }
  for (const auto& [key, lat] : links_.link_latency) {
    transport_.set_latency(static_cast<NodeId>(key >> 32),
                           static_cast<NodeId>(key & 0xffffffffu), lat);
  }

  nodes_.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes_.push_back(std::make_unique<Node>(
        i, cfg_.variant, cfg_.mesh, cfg_.protocol,
        root_rng_.derive(kSaltNodeBase + i), kernel_, transport_, metrics_,
        table_));
    nodes_[i]->set_peers(topo_.mesh[i], topo_.non_mesh_peers(i));
  }

  transport_.deliver_control = [this](NodeId dst, NodeId src,
                                      const ControlMessage& m) {
    nodes_[dst]->handle_control(src, m);
  };
  transport_.deliver_data = [this](NodeId dst, NodeId src, MsgId id,
                                   SendTag tag) {
    nodes_[dst]->handle_data(src, id, tag);
  };
  transport_.drop_data_at_start = [this](NodeId src, NodeId dst, MsgId id,
                                         SendTag) {
    return nodes_[src]->should_drop_send(dst, id);
  };

  assign_adversaries();
  pick_publishers();
}

void Simulation::assign_adversaries() {
  roles_.assign(cfg_.n_nodes, AdversaryKind::None);
  const auto count = static_cast<std::uint32_t>(
      cfg_.adversary.fraction * static_cast<double>(cfg_.n_nodes));
  if (cfg_.adversary.kind == AdversaryKind::None || count == 0) {
    // No draws consumed: an adversary-free run is bit-identical to one
    // that never mentioned an adversary.
    return;
  }
  auto adv_rng = root_rng_.derive(kSaltAdversary);
  std::vector<NodeId> all(cfg_.n_nodes);
  for (NodeId i = 0; i < cfg_.n_nodes; ++i) all[i] = i;
  auto picked = adv_rng.sample(all, count);
  for (NodeId id : picked) {
    roles_[id] = cfg_.adversary.kind;
    nodes_[id]->set_adversary(cfg_.adversary.kind);
  }
}

void Simulation::pick_publishers() {
  // Round-robin across bandwidth classes so a heterogeneous network is
  // published into from every class; adversaries never publish.
  std::map<int, std::vector<NodeId>> by_class;
  for (NodeId i = 0; i < cfg_.n_nodes; ++i) {
    if (roles_[i] != AdversaryKind::None) continue;
    by_class[links_.node_class[i]].push_back(i);
  }
  if (by_class.empty()) {
    throw std::runtime_error("scenario: no honest nodes left to publish");
  }
  std::vector<std::vector<NodeId>*> lists;
  for (auto& [cls, v] : by_class) lists.push_back(&v);
  std::vector<std::size_t> cursor(lists.size(), 0);
  std::size_t cls = 0;
  while (publishers_.size() < cfg_.n_publishers) {
    bool advanced = false;
    for (std::size_t tries = 0; tries < lists.size(); ++tries) {
      auto idx = (cls + tries) % lists.size();
      if (cursor[idx] < lists[idx]->size()) {
        publishers_.push_back((*lists[idx])[cursor[idx]++]);
        cls = idx + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      throw std::runtime_error("scenario: fewer honest nodes than publishers");
    }
  }
}

void Simulation::schedule_publishes() {
  auto sched_rng = root_rng_.derive(kSaltSchedule);
  (void)sched_rng;  // reserved for jittered schedules
  const std::uint32_t total = cfg_.warmup_messages + cfg_.n_messages;
  expected_messages_ = total;
  std::map<NodeId, std::uint32_t> next_seq;
  for (std::uint32_t i = 0; i < total; ++i) {
    const NodeId pub = publishers_[i % publishers_.size()];
    DataMessage msg;
    msg.publisher = pub;
    msg.seq_no = next_seq[pub]++;
    msg.id = make_msg_id(pub, msg.seq_no);
    msg.length = cfg_.message_size_bytes;
    msg.is_warmup = i < cfg_.warmup_messages;
    const SimTime at =
        cfg_.publish_start + static_cast<SimTime>(i) * cfg_.inter_message_delay;
    kernel_.schedule_at(at, [this, msg] { nodes_[msg.publisher]->publish(msg); });
  }
}

RunResult Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run called twice");
  ran_ = true;

  for (auto& n : nodes_) n->start_heartbeat();
  schedule_publishes();

  RunResult res;
  const SimTime slice = 200 * kMs;
  SimTime horizon = 0;
  bool covered = false;
  SimTime stop_at = cfg_.run_limit;
  while (horizon < stop_at) {
    horizon = std::min<SimTime>(horizon + slice, stop_at);
    kernel_.run_until_idle(horizon);
    if (!covered && metrics_.messages().size() == expected_messages_ &&
        metrics_.full_coverage()) {
      covered = true;
      res.covered_at = kernel_.now();
      stop_at = std::min<SimTime>(cfg_.run_limit, horizon + cfg_.drain_grace);
    }
  }
  res.full_coverage = covered;
  res.end_time = kernel_.now();
  return res;
}

}  // namespace gossipsim
