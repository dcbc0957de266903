#include "gossipsim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace gossipsim {

const char* byte_category_name(ByteCategory c) {
  switch (c) {
    case ByteCategory::Data: return "data";
    case ByteCategory::DataDuplicate: return "data_duplicate";
    case ByteCategory::IwantReply: return "iwant_reply";
    case ByteCategory::Ihave: return "ihave";
    case ByteCategory::Iwant: return "iwant";
    case ByteCategory::Idontwant: return "idontwant";
    case ByteCategory::Preamble: return "preamble";
    case ByteCategory::Imreceiving: return "imreceiving";
  }
  return "?";
}

void Metrics::register_message(const DataMessage& m, SimTime publish_time) {
  MessageStats s;
  s.id = m.id;
  s.publisher = m.publisher;
  s.size = m.length;
  s.publish_time = publish_time;
  s.warmup = m.is_warmup;
  s.first_delivery[m.publisher] = publish_time;
  index_[m.id] = messages_.size();
  messages_.push_back(std::move(s));
}

MessageStats& Metrics::stats_for(MsgId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::logic_error("metrics: unknown message");
  return messages_[it->second];
}

const MessageStats& Metrics::message(MsgId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::logic_error("metrics: unknown message");
  return messages_[it->second];
}

void Metrics::record_send_bytes(ByteCategory c, std::uint64_t bytes) {
  bytes_[static_cast<std::size_t>(c)] += bytes;
}

void Metrics::record_first_delivery(MsgId id, NodeId node, SimTime t) {
  stats_for(id).first_delivery.emplace(node, t);
}

void Metrics::record_duplicate(MsgId id, NodeId node, std::uint64_t wire_bytes,
                               bool via_iwant_reply) {
  MessageStats& s = stats_for(id);
  ++s.duplicates[node];
  ++s.duplicate_total;
  if (via_iwant_reply) {
    ++s.duplicates_via_iwant_reply;
  } else {
    // Bytes were counted as Data at send start; now known redundant.
    bytes_[static_cast<std::size_t>(ByteCategory::Data)] -= wire_bytes;
    bytes_[static_cast<std::size_t>(ByteCategory::DataDuplicate)] += wire_bytes;
  }
}

void Metrics::trace(TraceKind kind, NodeId a, NodeId b, MsgId msg, SimTime t,
                    std::uint64_t extra) {
  auto mix = [this](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      trace_hash_ ^= (v >> (i * 8)) & 0xff;
      trace_hash_ *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(kind));
  mix(a);
  mix(b);
  mix(msg);
  mix(static_cast<std::uint64_t>(t));
  mix(extra);
  if (record_trace_) {
    trace_.push_back({t, kind, a, b, msg, extra});
  }
}

std::uint64_t Metrics::total_bytes() const {
  std::uint64_t sum = 0;
  for (auto b : bytes_) sum += b;
  return sum;
}

double Metrics::coverage(const MessageStats& m) const {
  if (n_nodes_ == 0) return 0.0;
  return static_cast<double>(m.first_delivery.size()) / n_nodes_;
}

bool Metrics::full_coverage() const {
  for (const auto& m : messages_) {
    if (m.first_delivery.size() != n_nodes_) return false;
  }
  return true;
}

std::optional<SimTime> Metrics::dissemination_time(const MessageStats& m) const {
  if (m.first_delivery.size() != n_nodes_) return std::nullopt;
  SimTime last = m.publish_time;
  for (const auto& [node, t] : m.first_delivery) last = std::max(last, t);
  return last - m.publish_time;
}

std::optional<double> Metrics::latency_l_cov_ms() const {
  double sum = 0;
  int count = 0;
  for (const auto& m : messages_) {
    if (m.warmup) continue;
    auto d = dissemination_time(m);
    if (!d) return std::nullopt;
    sum += to_ms(*d);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

double Metrics::avg_duplicates() const {
  std::uint64_t dup = 0;
  int count = 0;
  for (const auto& m : messages_) {
    if (m.warmup) continue;
    dup += m.duplicate_total;
    ++count;
  }
  if (count == 0 || n_nodes_ == 0) return 0.0;
  return static_cast<double>(dup) /
         (static_cast<double>(n_nodes_) * static_cast<double>(count));
}

double Metrics::iwant_reply_share() const {
  std::uint64_t dup = 0;
  std::uint64_t via = 0;
  for (const auto& m : messages_) {
    if (m.warmup) continue;
    dup += m.duplicate_total;
    via += m.duplicates_via_iwant_reply;
  }
  if (dup == 0) return 0.0;
  return static_cast<double>(via) / static_cast<double>(dup);
}

std::vector<TemporalSpreadRow> Metrics::temporal_spread(SimTime bin) const {
  std::vector<TemporalSpreadRow> rows;
  for (const auto& m : messages_) {
    TemporalSpreadRow row;
    row.id = m.id;
    auto d = dissemination_time(m);
    row.dissemination_time = d.value_or(0);
    SimTime span = 0;
    for (const auto& [node, t] : m.first_delivery) {
      if (node == m.publisher) continue;
      span = std::max(span, t - m.publish_time);
    }
    row.bins.assign(static_cast<std::size_t>(span / bin) + 1, 0);
    for (const auto& [node, t] : m.first_delivery) {
      if (node == m.publisher) continue;
      ++row.bins[static_cast<std::size_t>((t - m.publish_time) / bin)];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> Metrics::shortfall_report() const {
  std::vector<std::string> out;
  for (const auto& m : messages_) {
    if (m.first_delivery.size() == n_nodes_) continue;
    out.push_back("message " + std::to_string(msg_publisher(m.id)) + ":" +
                  std::to_string(msg_seq(m.id)) + " reached " +
                  std::to_string(m.first_delivery.size()) + "/" +
                  std::to_string(n_nodes_) + " nodes");
  }
  return out;
}

}  // namespace gossipsim
