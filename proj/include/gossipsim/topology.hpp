#pragma once
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gossipsim/params.hpp"
#include "gossipsim/random.hpp"
#include "gossipsim/time.hpp"

namespace gossipsim {

// Known-peer graph plus the symmetric full-message meshes carved out of
// it. Static for the whole run.
struct Topology {
  std::vector<std::vector<NodeId>> known;  // adjacency, sorted
  std::vector<std::vector<NodeId>> mesh;   // subset of known, symmetric

  std::uint32_t size() const { return static_cast<std::uint32_t>(known.size()); }
  bool mesh_connected() const;
  std::vector<NodeId> non_mesh_peers(NodeId id) const;
};

// Random known-peer pools of ~known_peer_factor*D peers, then symmetric
// meshes targeting degree D within [D_low, D_high]. Retries with a
// perturbed seed until the mesh graph is connected; throws after 100
// attempts.
Topology build_topology(std::uint32_t n, const MeshParams& params,
                        RandomSource& rng);

struct LinkAssignment {
  std::vector<std::int64_t> node_rate_bps;
  std::vector<int> node_class;  // index into the bandwidth class list
  std::unordered_map<std::uint64_t, SimTime> link_latency;

  SimTime latency(NodeId a, NodeId b) const;
  static std::uint64_t key(NodeId a, NodeId b) {
    NodeId lo = a < b ? a : b;
    NodeId hi = a < b ? b : a;
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
  }
};

// Node rates drawn uniformly from the bandwidth classes, per-link
// latencies uniformly from the latency classes.
LinkAssignment assign_link_classes(const Topology& topo,
                                   const std::vector<std::int64_t>& bw_classes,
                                   const std::vector<SimTime>& lat_classes,
                                   RandomSource& rng);

}  // namespace gossipsim
