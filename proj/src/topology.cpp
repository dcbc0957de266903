#include "gossipsim/topology.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>

namespace gossipsim {

bool Topology::mesh_connected() const {
  if (mesh.empty()) return false;
  std::vector<bool> seen(mesh.size(), false);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = true;
  std::size_t visited = 1;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v : mesh[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        q.push(v);
      }
    }
  }
  return visited == mesh.size();
}

std::vector<NodeId> Topology::non_mesh_peers(NodeId id) const {
  std::vector<NodeId> out;
  std::set_difference(known[id].begin(), known[id].end(), mesh[id].begin(),
                      mesh[id].end(), std::back_inserter(out));
  return out;
}

namespace {

Topology attempt_build(std::uint32_t n, const MeshParams& p,
                       RandomSource rng) {
  const std::uint32_t pool =
      std::min<std::uint32_t>(static_cast<std::uint32_t>(p.known_peer_factor * p.d),
                              n - 1);
  std::vector<std::unordered_set<NodeId>> adj(n);
  for (NodeId i = 0; i < n; ++i) {
    std::uint32_t guard = 0;
    while (adj[i].size() < pool && guard < 50 * n) {
      ++guard;
      NodeId j = static_cast<NodeId>(rng.bounded(n));
      if (j == i || adj[i].count(j)) continue;
      adj[i].insert(j);
      adj[j].insert(i);
    }
  }

  std::vector<std::unordered_set<NodeId>> mesh(n);
  auto can_take = [&](NodeId v) {
    return mesh[v].size() < static_cast<std::size_t>(p.d_high);
  };
  // Preferring still-unsaturated peers keeps the realized degrees close
  // to D instead of drifting toward D_high.
  auto pick_candidate = [&](NodeId i) -> std::vector<NodeId> {
    std::vector<NodeId> under, over;
    for (NodeId j : adj[i]) {
      if (mesh[i].count(j) || !can_take(j)) continue;
      if (mesh[j].size() < static_cast<std::size_t>(p.d)) {
        under.push_back(j);
      } else {
        over.push_back(j);
      }
    }
    auto& chosen = under.empty() ? over : under;
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  };
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  for (NodeId i : order) {
    while (mesh[i].size() < static_cast<std::size_t>(p.d)) {
      auto cand = pick_candidate(i);
      if (cand.empty()) break;
      NodeId j = cand[rng.bounded(cand.size())];
      mesh[i].insert(j);
      mesh[j].insert(i);
    }
  }
  // Degree floor pass for nodes the greedy round left short.
  const std::size_t low = std::min<std::size_t>(p.d_low, n - 1);
  for (NodeId i = 0; i < n; ++i) {
    while (mesh[i].size() < low) {
      auto cand = pick_candidate(i);
      if (cand.empty()) break;
      NodeId j = cand[rng.bounded(cand.size())];
      mesh[i].insert(j);
      mesh[j].insert(i);
    }
  }

  Topology t;
  t.known.resize(n);
  t.mesh.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    t.known[i].assign(adj[i].begin(), adj[i].end());
    std::sort(t.known[i].begin(), t.known[i].end());
    t.mesh[i].assign(mesh[i].begin(), mesh[i].end());
    std::sort(t.mesh[i].begin(), t.mesh[i].end());
    if (t.mesh[i].size() < low ||
        t.mesh[i].size() > static_cast<std::size_t>(p.d_high)) {
      throw std::runtime_error("degree out of range");
    }
  }
  if (!t.mesh_connected()) throw std::runtime_error("mesh not connected");
  return t;
}

}  // namespace

Topology build_topology(std::uint32_t n, const MeshParams& params,
                        RandomSource& rng) {
  if (n <= static_cast<std::uint32_t>(params.d)) {
    throw std::invalid_argument("build_topology: need n > D");
  }
  std::string last_error;
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      return attempt_build(n, params, rng.derive(static_cast<std::uint64_t>(attempt)));
    } catch (const std::runtime_error& e) {
      last_error = e.what();
    }
  }
  throw std::runtime_error("build_topology: no valid mesh after 100 attempts (" +
                           last_error + ")");
}

SimTime LinkAssignment::latency(NodeId a, NodeId b) const {
  auto it = link_latency.find(key(a, b));
  if (it == link_latency.end()) {
    throw std::logic_error("no latency assigned for link");
  }
  return it->second;
}

LinkAssignment assign_link_classes(const Topology& topo,
                                   const std::vector<std::int64_t>& bw_classes,
                                   const std::vector<SimTime>& lat_classes,
                                   RandomSource& rng) {
  if (bw_classes.empty() || lat_classes.empty()) {
    throw std::invalid_argument("assign_link_classes: empty class list");
  }
  const std::uint32_t n = topo.size();
  LinkAssignment la;
  la.node_rate_bps.resize(n);
  la.node_class.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    const int c = static_cast<int>(rng.bounded(bw_classes.size()));
    la.node_class[i] = c;
    la.node_rate_bps[i] = bw_classes[c];
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : topo.known[i]) {
      if (j <= i) continue;
      la.link_latency[LinkAssignment::key(i, j)] =
          lat_classes[rng.bounded(lat_classes.size())];
    }
  }
  return la;
}

}  // namespace gossipsim
