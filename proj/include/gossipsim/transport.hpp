#pragma once
#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gossipsim/kernel.hpp"
#include "gossipsim/messages.hpp"
#include "gossipsim/metrics.hpp"
#include "gossipsim/time.hpp"

namespace gossipsim {

struct LinkParams {
  std::int64_t rate_bps = 0;
  SimTime latency = 0;
};

// Single-peer transfer time: S/R + tau_p, integer microseconds with
// round-half-up on the serialization term.
SimTime ideal_transfer_time(std::uint64_t size_bytes, std::int64_t rate_bps,
                            SimTime latency);

// Sequential fan-out to a D-peer mesh over one uplink: D*(S/R) + tau_p.
SimTime mesh_transfer_time(int d, std::uint64_t size_bytes,
                           std::int64_t rate_bps, SimTime latency);

// Slow-start approximation: serialization rate of a data transfer is
// capped at cwnd bytes per RTT; cwnd doubles per delivered flight up to
// the bandwidth-delay product and resets to initial after idle_reset of
// disuse. Off by default; enable to reproduce cold-connection warmup.
struct CwndConfig {
  bool enabled = false;
  std::uint64_t initial_bytes = 14600;  // 10 typical segments
  SimTime idle_reset = 5 * kSec;
};

struct CwndState {
  std::uint64_t cwnd_bytes = 0;
  SimTime last_use = 0;
  bool used = false;
};

// Per-node uplink with FIFO serialization: one transfer occupies the
// uplink at a time, matching the sequential-send arithmetic of the mesh
// timing model. Downlinks are unlimited. Queues are unbounded; queue
// growth is a measured phenomenon, not an error.
class Transport {
 public:
  Transport(SimKernel& kernel, Metrics& metrics, WireSizes wire,
            CwndConfig cwnd);

  void add_node(NodeId id, std::int64_t rate_bps);
  void set_latency(NodeId a, NodeId b, SimTime latency);
  SimTime latency(NodeId a, NodeId b) const;
  std::int64_t node_rate(NodeId id) const { return nodes_.at(id).rate_bps; }

  void send_control(NodeId src, NodeId dst, ControlMessage msg);
  // with_preamble prepends a PREAMBLE on the same uplink immediately
  // before the data; the pair is committed or dropped together.
  void send_data(NodeId src, NodeId dst, MsgId id, std::uint64_t length,
                 bool with_preamble, SendTag tag);

  // Delivery callbacks, wired up by the simulation.
  std::function<void(NodeId dst, NodeId src, const ControlMessage&)>
      deliver_control;
  std::function<void(NodeId dst, NodeId src, MsgId, SendTag)> deliver_data;
  // Consulted when a data transfer reaches the head of the uplink; a
  // true result drops it (and its preamble) without transmitting.
  std::function<bool(NodeId src, NodeId dst, MsgId, SendTag)>
      drop_data_at_start;

  std::uint64_t cwnd_bytes(NodeId src, NodeId dst) const;
  std::size_t queue_depth(NodeId src) const;
  std::uint64_t delivered_bytes() const { return delivered_bytes_; }
  std::uint64_t started_bytes() const { return started_bytes_; }
  const WireSizes& wire() const { return wire_; }

 private:
  struct Transfer {
    NodeId dst = 0;
    bool is_data = false;
    MsgId msg = 0;
    std::uint64_t data_length = 0;
    bool with_preamble = false;
    SendTag tag = SendTag::Eager;
    ControlMessage control;
  };
  struct Uplink {
    std::int64_t rate_bps = 0;
    std::deque<Transfer> queue;
    bool busy = false;
  };

  void start_next(NodeId src);
  void begin_transfer(NodeId src, Transfer t);
  std::int64_t effective_rate(NodeId src, NodeId dst, SimTime lat);
  void on_flight_delivered(NodeId src, NodeId dst, SimTime lat);
  static std::uint64_t pair_key(NodeId a, NodeId b) {
    NodeId lo = a < b ? a : b;
    NodeId hi = a < b ? b : a;
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
  }

  SimKernel& kernel_;
  Metrics& metrics_;
  WireSizes wire_;
  CwndConfig cwnd_cfg_;
  std::unordered_map<NodeId, Uplink> nodes_;
  std::unordered_map<std::uint64_t, SimTime> latency_;
  std::unordered_map<std::uint64_t, CwndState> cwnd_;  // keyed (src, dst)
  std::uint64_t delivered_bytes_ = 0;
  std::uint64_t started_bytes_ = 0;
};

}  // namespace gossipsim
