#include "gossipsim/report.hpp"

#include <cstdio>

#include "gossipsim/config.hpp"

namespace gossipsim {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

SummaryRow make_summary(const Simulation& sim, const RunResult& res) {
  const auto& cfg = sim.config();
  const auto& m = sim.metrics();
  SummaryRow r;
  r.variant = variant_name(cfg.variant);
  r.n_nodes = cfg.n_nodes;
  r.n_publishers = cfg.n_publishers;
  r.message_size_bytes = cfg.message_size_bytes;
  r.seed = cfg.seed;
  r.latency_ms = m.latency_l_cov_ms();
  r.bandwidth_bytes = m.total_bytes();
  r.avg_duplicates = m.avg_duplicates();
  r.iwant_requests = m.iwant_requests();
  r.iwant_reply_share = m.iwant_reply_share();
  (void)res;
  return r;
}

std::string summary_csv_header() {
  return "variant,n_nodes,n_publishers,message_size_bytes,seed,latency_ms,"
         "bandwidth_bytes,avg_duplicates,iwant_requests,iwant_reply_share";
}

std::string summary_csv_row(const SummaryRow& r) {
  std::string out = r.variant;
  out += "," + std::to_string(r.n_nodes);
  out += "," + std::to_string(r.n_publishers);
  out += "," + std::to_string(r.message_size_bytes);
  out += "," + std::to_string(r.seed);
  out += ",";
  if (r.latency_ms) out += format_double(*r.latency_ms);
  out += "," + std::to_string(r.bandwidth_bytes);
  out += "," + format_double(r.avg_duplicates);
  out += "," + std::to_string(r.iwant_requests);
  out += "," + format_double(r.iwant_reply_share);
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << summary_csv_header() << "\n";
  for (const auto& r : rows) out << summary_csv_row(r) << "\n";
}

void write_temporal_csv(std::ostream& out, const Metrics& metrics,
                        SimTime bin) {
  out << "msg_id,dissemination_ms,bin_ms,deliveries\n";
  for (const auto& row : metrics.temporal_spread(bin)) {
    for (std::size_t i = 0; i < row.bins.size(); ++i) {
      out << row.id << ","
          << format_double(static_cast<double>(row.dissemination_time) / kMs)
          << "," << (static_cast<SimTime>(i) * bin / kMs) << "," << row.bins[i]
          << "\n";
    }
  }
}

json detail_json(const Simulation& sim, const RunResult& res) {
  const auto& m = sim.metrics();
  json j;
  j["config"] = config_to_json(sim.config());
  j["full_coverage"] = res.full_coverage;
  j["end_time_ms"] = static_cast<double>(res.end_time) / kMs;
  j["covered_at_ms"] = static_cast<double>(res.covered_at) / kMs;
  j["trace_hash"] = m.trace_hash();
  j["iwant_requests"] = m.iwant_requests();
  j["invariant_violations"] = m.invariant_violations();
  j["avg_duplicates"] = m.avg_duplicates();
  j["iwant_reply_share"] = m.iwant_reply_share();
  if (auto lat = m.latency_l_cov_ms()) j["latency_ms"] = *lat;

  json bytes = json::object();
  for (std::size_t i = 0; i < kByteCategoryCount; ++i) {
    const auto c = static_cast<ByteCategory>(i);
    bytes[byte_category_name(c)] = m.bytes(c);
  }
  j["bytes"] = bytes;
  j["total_bytes"] = m.total_bytes();

  json msgs = json::array();
  for (const auto& ms : m.messages()) {
    json e;
    e["id"] = ms.id;
    e["publisher"] = ms.publisher;
    e["size"] = ms.size;
    e["warmup"] = ms.warmup;
    e["publish_time_ms"] = static_cast<double>(ms.publish_time) / kMs;
    e["coverage"] = m.coverage(ms);
    if (auto dt = m.dissemination_time(ms)) {
      e["dissemination_ms"] = static_cast<double>(*dt) / kMs;
    }
    e["duplicates"] = ms.duplicate_total;
    e["duplicates_via_iwant_reply"] = ms.duplicates_via_iwant_reply;
    msgs.push_back(std::move(e));
  }
  j["messages"] = msgs;

  json roles = json::array();
  for (auto k : sim.roles()) roles.push_back(adversary_name(k));
  j["roles"] = roles;
  j["publishers"] = sim.publishers();

  json scores = json::object();
  for (NodeId i = 0; i < sim.config().n_nodes; ++i) {
    for (const auto& [peer, s] : sim.node(i).scores()) {
      if (s != 0.0) {
        scores[std::to_string(i)][std::to_string(peer)] = s;
      }
    }
  }
  j["scores"] = scores;

  json shortfall = json::array();
  for (const auto& line : m.shortfall_report()) shortfall.push_back(line);
  j["shortfall"] = shortfall;
  return j;
}

}  // namespace gossipsim
