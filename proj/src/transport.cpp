#include "gossipsim/transport.hpp"

#include <algorithm>
#include <stdexcept>

namespace gossipsim {

namespace {

SimTime serialization_us(std::uint64_t bytes, std::int64_t rate_bps) {
  // bits * 1e6 / rate, round half up.
  const std::int64_t bit_us = static_cast<std::int64_t>(bytes) * 8 * 1'000'000;
  return (bit_us + rate_bps / 2) / rate_bps;
}

std::uint64_t directed_key(NodeId src, NodeId dst) {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

}  // namespace

SimTime ideal_transfer_time(std::uint64_t size_bytes, std::int64_t rate_bps,
                            SimTime latency) {
  if (rate_bps <= 0) throw std::invalid_argument("ideal_transfer_time: rate");
  return serialization_us(size_bytes, rate_bps) + latency;
}

SimTime mesh_transfer_time(int d, std::uint64_t size_bytes,
                           std::int64_t rate_bps, SimTime latency) {
  if (d < 1) throw std::invalid_argument("mesh_transfer_time: D >= 1");
  if (rate_bps <= 0) throw std::invalid_argument("mesh_transfer_time: rate");
  return static_cast<SimTime>(d) * serialization_us(size_bytes, rate_bps) +
         latency;
}

Transport::Transport(SimKernel& kernel, Metrics& metrics, WireSizes wire,
                     CwndConfig cwnd)
    : kernel_(kernel), metrics_(metrics), wire_(wire), cwnd_cfg_(cwnd) {}

void Transport::add_node(NodeId id, std::int64_t rate_bps) {
  if (rate_bps <= 0) throw std::invalid_argument("node rate must be > 0");
  nodes_[id].rate_bps = rate_bps;
}

void Transport::set_latency(NodeId a, NodeId b, SimTime latency) {
  latency_[pair_key(a, b)] = latency;
}

SimTime Transport::latency(NodeId a, NodeId b) const {
  auto it = latency_.find(pair_key(a, b));
  if (it == latency_.end()) throw std::logic_error("no link between nodes");
  return it->second;
}

void Transport::send_control(NodeId src, NodeId dst, ControlMessage msg) {
  Transfer t;
  t.dst = dst;
  t.is_data = false;
  t.control = std::move(msg);
  Uplink& up = nodes_.at(src);
  up.queue.push_back(std::move(t));
  if (!up.busy) start_next(src);
}

void Transport::send_data(NodeId src, NodeId dst, MsgId id,
                          std::uint64_t length, bool with_preamble,
                          SendTag tag) {
  if (src == dst) throw std::logic_error("send_data: src == dst");
  Transfer t;
  t.dst = dst;
  t.is_data = true;
  t.msg = id;
  t.data_length = length;
  t.with_preamble = with_preamble;
  t.tag = tag;
  Uplink& up = nodes_.at(src);
  up.queue.push_back(std::move(t));
  if (!up.busy) start_next(src);
}

void Transport::start_next(NodeId src) {
  Uplink& up = nodes_.at(src);
  while (!up.queue.empty()) {
    Transfer t = std::move(up.queue.front());
    up.queue.pop_front();
    if (t.is_data && drop_data_at_start &&
        drop_data_at_start(src, t.dst, t.msg, t.tag)) {
      continue;  // suppressed before any bytes hit the wire
    }
    begin_transfer(src, std::move(t));
    return;
  }
  up.busy = false;
}

std::int64_t Transport::effective_rate(NodeId src, NodeId dst, SimTime lat) {
  const std::int64_t rate = nodes_.at(src).rate_bps;
  if (!cwnd_cfg_.enabled) return rate;
  const SimTime rtt = 2 * lat;
  if (rtt <= 0) return rate;
  CwndState& st = cwnd_[directed_key(src, dst)];
  const SimTime now = kernel_.now();
  if (!st.used || now - st.last_use > cwnd_cfg_.idle_reset) {
    st.cwnd_bytes = cwnd_cfg_.initial_bytes;
    st.used = true;
  }
  st.last_use = now;
  // cwnd bytes per RTT, expressed in bits/s.
  const std::int64_t cap =
      static_cast<std::int64_t>(st.cwnd_bytes) * 8 * 1'000'000 / rtt;
  return std::clamp<std::int64_t>(cap, 1, rate);
}

void Transport::on_flight_delivered(NodeId src, NodeId dst, SimTime lat) {
  if (!cwnd_cfg_.enabled) return;
  const SimTime rtt = 2 * lat;
  if (rtt <= 0) return;
  CwndState& st = cwnd_[directed_key(src, dst)];
  const std::uint64_t bdp = std::max<std::uint64_t>(
      cwnd_cfg_.initial_bytes,
      static_cast<std::uint64_t>(nodes_.at(src).rate_bps) * rtt / 8 / 1'000'000);
  st.cwnd_bytes = std::min(st.cwnd_bytes * 2, bdp);
  st.last_use = kernel_.now();
}

void Transport::begin_transfer(NodeId src, Transfer t) {
  Uplink& up = nodes_.at(src);
  up.busy = true;
  const SimTime now = kernel_.now();
  const SimTime lat = latency(src, t.dst);
  const NodeId dst = t.dst;

  if (!t.is_data) {
    const std::uint64_t bytes = wire_.control_size(t.control);
    ByteCategory cat = ByteCategory::Ihave;
    if (std::holds_alternative<IWant>(t.control)) cat = ByteCategory::Iwant;
    if (std::holds_alternative<IDontWant>(t.control)) cat = ByteCategory::Idontwant;
    if (std::holds_alternative<Preamble>(t.control)) cat = ByteCategory::Preamble;
    if (std::holds_alternative<ImReceiving>(t.control)) cat = ByteCategory::Imreceiving;
    metrics_.record_send_bytes(cat, bytes);
    started_bytes_ += bytes;
    metrics_.trace(TraceKind::SendControl, src, dst, 0, now, bytes);
    const SimTime done = now + serialization_us(bytes, up.rate_bps);
    auto payload = std::make_shared<ControlMessage>(std::move(t.control));
    kernel_.schedule_at(done + lat, [this, src, dst, payload, bytes] {
      delivered_bytes_ += bytes;
      if (deliver_control) deliver_control(dst, src, *payload);
    });
    kernel_.schedule_at(done, [this, src] {
      nodes_.at(src).busy = false;
      start_next(src);
    });
    return;
  }

  const std::int64_t rate = effective_rate(src, dst, lat);
  const std::uint64_t data_bytes = wire_.data_size(t.data_length);
  SimTime pre_done = now;
  if (t.with_preamble) {
    metrics_.record_send_bytes(ByteCategory::Preamble, wire_.preamble);
    started_bytes_ += wire_.preamble;
    metrics_.trace(TraceKind::SendControl, src, dst, t.msg, now, wire_.preamble);
    pre_done = now + serialization_us(wire_.preamble, up.rate_bps);
    const MsgId msg = t.msg;
    const std::uint64_t len = t.data_length;
    kernel_.schedule_at(pre_done + lat, [this, src, dst, msg, len] {
      delivered_bytes_ += wire_.preamble;
      if (deliver_control) deliver_control(dst, src, Preamble{msg, len});
    });
  }
  metrics_.record_send_bytes(
      t.tag == SendTag::IwantReply ? ByteCategory::IwantReply
                                   : ByteCategory::Data,
      data_bytes);
  started_bytes_ += data_bytes;
  metrics_.trace(TraceKind::SendData, src, dst, t.msg, now,
                 static_cast<std::uint64_t>(t.tag));
  const SimTime data_done = pre_done + serialization_us(data_bytes, rate);
  const MsgId msg = t.msg;
  const SendTag tag = t.tag;
  kernel_.schedule_at(data_done + lat, [this, src, dst, msg, tag, data_bytes] {
    delivered_bytes_ += data_bytes;
    if (deliver_data) deliver_data(dst, src, msg, tag);
  });
  kernel_.schedule_at(data_done, [this, src, dst, lat] {
    on_flight_delivered(src, dst, lat);
    nodes_.at(src).busy = false;
    start_next(src);
  });
}

std::uint64_t Transport::cwnd_bytes(NodeId src, NodeId dst) const {
  auto it = cwnd_.find(directed_key(src, dst));
  return it == cwnd_.end() ? cwnd_cfg_.initial_bytes : it->second.cwnd_bytes;
}

std::size_t Transport::queue_depth(NodeId src) const {
  return nodes_.at(src).queue.size();
}

}  // namespace gossipsim
