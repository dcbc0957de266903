#pragma once
#include <cstdint>
#include <memory>
#include <vector>

#include "gossipsim/kernel.hpp"
#include "gossipsim/metrics.hpp"
#include "gossipsim/params.hpp"
#include "gossipsim/protocol.hpp"
#include "gossipsim/topology.hpp"
#include "gossipsim/transport.hpp"

namespace gossipsim {

// Full description of one run. All times are simulated microseconds;
// the config loader converts from milliseconds.
struct ScenarioConfig {
  ProtocolVariant variant = ProtocolVariant::V1_1;
  std::uint32_t n_nodes = 50;
  std::uint32_t n_publishers = 1;
  std::uint32_t n_messages = 1;
  std::uint32_t warmup_messages = 0;
  std::uint64_t message_size_bytes = 1'000'000;
  std::uint64_t seed = 1;
  SimTime publish_start = 1 * kSec;
  SimTime inter_message_delay = 200 * kMs;
  SimTime run_limit = 120 * kSec;
  SimTime drain_grace = 500 * kMs;
  bool trace = false;

  MeshParams mesh;
  ProtocolConfig protocol;
  WireSizes wire;
  CwndConfig cwnd;
  AdversaryProfile adversary;

  std::vector<std::int64_t> bandwidth_classes{100'000'000};
  std::vector<SimTime> latency_classes{100 * kMs};

  void validate() const;
};

struct RunResult {
  bool full_coverage = false;
  SimTime end_time = 0;      // virtual time when the run stopped
  SimTime covered_at = 0;    // time full coverage was first observed
};

// Owns the kernel, transport, metrics and node set for one run and
// wires them together. Construct, then run() exactly once.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);
  // Injected topology/link variant for tests and for paired comparisons
  // that hold the network fixed across protocol variants.
  Simulation(ScenarioConfig cfg, Topology topo, LinkAssignment links);

  RunResult run();

  const ScenarioConfig& config() const { return cfg_; }
  const Topology& topology() const { return topo_; }
  const LinkAssignment& links() const { return links_; }
  Metrics& metrics() { return metrics_; }
  const Metrics& metrics() const { return metrics_; }
  SimKernel& kernel() { return kernel_; }
  Transport& transport() { return transport_; }
  Node& node(NodeId id) { return *nodes_[id]; }
  const Node& node(NodeId id) const { return *nodes_[id]; }
  const std::vector<NodeId>& publishers() const { return publishers_; }
  const std::vector<AdversaryKind>& roles() const { return roles_; }

 private:
  void wire_up();
  void assign_adversaries();
  void pick_publishers();
  void schedule_publishes();

  ScenarioConfig cfg_;
  RandomSource root_rng_;
  Topology topo_;
  LinkAssignment links_;
  SimKernel kernel_;
  Metrics metrics_;
  MessageTable table_;
  Transport transport_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<AdversaryKind> roles_;
  std::vector<NodeId> publishers_;
  std::uint32_t expected_messages_ = 0;
  bool ran_ = false;
};

}  // namespace gossipsim
