#include "gossipsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gossipsim {

using nlohmann::json;

namespace {

double ms_from(SimTime t) { return static_cast<double>(t) / kMs; }
SimTime ms_to(double ms) {
  return static_cast<SimTime>(std::llround(ms * static_cast<double>(kMs)));
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t next = std::min({row[j] + 1, row[j - 1] + 1,
                                   diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = row[j];
      row[j] = next;
    }
  }
  return row[b.size()];
}

std::string nearest_key(const std::string& key, const json& schema) {
  std::string best;
  std::size_t best_d = key.size() + 1;
  for (auto it = schema.begin(); it != schema.end(); ++it) {
    std::size_t d = edit_distance(key, it.key());
    if (d < best_d) {
      best_d = d;
      best = it.key();
    }
  }
  return best;
}

[[noreturn]] void unknown_key(const std::string& path, const json& schema) {
  std::string msg = "unknown config key '" + path + "'";
  std::string hint = nearest_key(path.substr(path.rfind('.') + 1), schema);
  if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
  throw std::invalid_argument(msg);
}

// Recursively overlays src onto dst, rejecting keys absent from dst.
void merge_checked(json& dst, const json& src, const std::string& prefix) {
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!dst.contains(it.key())) unknown_key(path, dst);
    if (dst[it.key()].is_object() && it.value().is_object()) {
      merge_checked(dst[it.key()], it.value(), path);
    } else {
      dst[it.key()] = it.value();
    }
  }
}

}  // namespace

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["variant"] = variant_name(c.variant);
  j["n_nodes"] = c.n_nodes;
  j["n_publishers"] = c.n_publishers;
  j["n_messages"] = c.n_messages;
  j["warmup_messages"] = c.warmup_messages;
  j["message_size_bytes"] = c.message_size_bytes;
  j["seed"] = c.seed;
  j["publish_start"] = ms_from(c.publish_start);
  j["inter_message_delay"] = ms_from(c.inter_message_delay);
  j["run_limit"] = ms_from(c.run_limit);
  j["drain_grace"] = ms_from(c.drain_grace);
  j["trace"] = c.trace;
  j["bandwidth_classes"] = c.bandwidth_classes;
  {
    std::vector<double> lat;
    for (auto t : c.latency_classes) lat.push_back(ms_from(t));
    j["latency_classes"] = lat;
  }
  j["mesh"] = {{"d", c.mesh.d},
               {"d_low", c.mesh.d_low},
               {"d_high", c.mesh.d_high},
               {"d_lazy", c.mesh.d_lazy},
               {"d_out", c.mesh.d_out},
               {"gossip_factor", c.mesh.gossip_factor},
               {"heartbeat_interval", ms_from(c.mesh.heartbeat_interval)},
               {"k_reduced", c.mesh.k_reduced},
               {"large_threshold", c.mesh.large_threshold},
               {"flood_publish", c.mesh.flood_publish},
               {"known_peer_factor", c.mesh.known_peer_factor}};
  j["protocol"] = {
      {"preamble_delta", ms_from(c.protocol.preamble_delta)},
      {"estimate_safety", c.protocol.estimate_safety},
      {"estimate_min_rate_bps", c.protocol.estimate_min_rate_bps},
      {"estimate_max_latency", ms_from(c.protocol.estimate_max_latency)},
      {"penalty_stalled", c.protocol.penalty_stalled},
      {"penalty_iwant_ignored", c.protocol.penalty_iwant_ignored},
      {"max_iwant_retries", c.protocol.max_iwant_retries},
      {"iwant_assumed_length", c.protocol.iwant_assumed_length},
      {"cache_ttl", ms_from(c.protocol.cache_ttl)},
      {"gossip_window_heartbeats", c.protocol.gossip_window_heartbeats},
      {"push_fallback", c.protocol.push_fallback}};
  j["wire"] = {{"data_header", c.wire.data_header},
               {"ihave_base", c.wire.ihave_base},
               {"iwant_base", c.wire.iwant_base},
               {"per_msg_id", c.wire.per_msg_id},
               {"idontwant", c.wire.idontwant},
               {"preamble", c.wire.preamble},
               {"imreceiving", c.wire.imreceiving}};
  j["cwnd"] = {{"enabled", c.cwnd.enabled},
               {"initial_bytes", c.cwnd.initial_bytes},
               {"idle_reset", ms_from(c.cwnd.idle_reset)}};
  j["adversary"] = {{"kind", adversary_name(c.adversary.kind)},
                    {"fraction", c.adversary.fraction}};
  return j;
}

ScenarioConfig config_from_json(const json& in) {
  json j = config_to_json(ScenarioConfig{});
  merge_checked(j, in, "");

  ScenarioConfig c;
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.n_nodes = j.at("n_nodes").get<std::uint32_t>();
  c.n_publishers = j.at("n_publishers").get<std::uint32_t>();
  c.n_messages = j.at("n_messages").get<std::uint32_t>();
  c.warmup_messages = j.at("warmup_messages").get<std::uint32_t>();
  c.message_size_bytes = j.at("message_size_bytes").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.publish_start = ms_to(j.at("publish_start").get<double>());
  c.inter_message_delay = ms_to(j.at("inter_message_delay").get<double>());
  c.run_limit = ms_to(j.at("run_limit").get<double>());
  c.drain_grace = ms_to(j.at("drain_grace").get<double>());
  c.trace = j.at("trace").get<bool>();
  c.bandwidth_classes = j.at("bandwidth_classes").get<std::vector<std::int64_t>>();
  c.latency_classes.clear();
  for (double ms : j.at("latency_classes").get<std::vector<double>>()) {
    c.latency_classes.push_back(ms_to(ms));
  }

  const json& m = j.at("mesh");
  c.mesh.d = m.at("d").get<int>();
  c.mesh.d_low = m.at("d_low").get<int>();
  c.mesh.d_high = m.at("d_high").get<int>();
  c.mesh.d_lazy = m.at("d_lazy").get<int>();
  c.mesh.d_out = m.at("d_out").get<int>();
  c.mesh.gossip_factor = m.at("gossip_factor").get<double>();
  c.mesh.heartbeat_interval = ms_to(m.at("heartbeat_interval").get<double>());
  c.mesh.k_reduced = m.at("k_reduced").get<int>();
  c.mesh.large_threshold = m.at("large_threshold").get<std::uint64_t>();
  c.mesh.flood_publish = m.at("flood_publish").get<bool>();
  c.mesh.known_peer_factor = m.at("known_peer_factor").get<int>();

  const json& p = j.at("protocol");
  c.protocol.preamble_delta = ms_to(p.at("preamble_delta").get<double>());
  c.protocol.estimate_safety = p.at("estimate_safety").get<double>();
  c.protocol.estimate_min_rate_bps =
      p.at("estimate_min_rate_bps").get<std::int64_t>();
  c.protocol.estimate_max_latency =
      ms_to(p.at("estimate_max_latency").get<double>());
  c.protocol.penalty_stalled = p.at("penalty_stalled").get<double>();
  c.protocol.penalty_iwant_ignored = p.at("penalty_iwant_ignored").get<double>();
  c.protocol.max_iwant_retries = p.at("max_iwant_retries").get<int>();
  c.protocol.iwant_assumed_length =
      p.at("iwant_assumed_length").get<std::uint64_t>();
  c.protocol.cache_ttl = ms_to(p.at("cache_ttl").get<double>());
  c.protocol.gossip_window_heartbeats =
      p.at("gossip_window_heartbeats").get<int>();
  c.protocol.push_fallback = p.at("push_fallback").get<bool>();

  const json& w = j.at("wire");
  c.wire.data_header = w.at("data_header").get<std::uint64_t>();
  c.wire.ihave_base = w.at("ihave_base").get<std::uint64_t>();
  c.wire.iwant_base = w.at("iwant_base").get<std::uint64_t>();
  c.wire.per_msg_id = w.at("per_msg_id").get<std::uint64_t>();
  c.wire.idontwant = w.at("idontwant").get<std::uint64_t>();
  c.wire.preamble = w.at("preamble").get<std::uint64_t>();
  c.wire.imreceiving = w.at("imreceiving").get<std::uint64_t>();

  const json& cw = j.at("cwnd");
  c.cwnd.enabled = cw.at("enabled").get<bool>();
  c.cwnd.initial_bytes = cw.at("initial_bytes").get<std::uint64_t>();
  c.cwnd.idle_reset = ms_to(cw.at("idle_reset").get<double>());

  const json& a = j.at("adversary");
  c.adversary.kind = adversary_from_string(a.at("kind").get<std::string>());
  c.adversary.fraction = a.at("fraction").get<double>();

  c.validate();
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must be key=value: " + assignment);
  }
  const std::string dotted = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json* cur = &j;
  std::string consumed;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw std::invalid_argument("empty override key");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    consumed = consumed.empty() ? parts[i] : consumed + "." + parts[i];
    if (!cur->contains(parts[i])) unknown_key(consumed, *cur);
    if (i + 1 < parts.size()) {
      cur = &(*cur)[parts[i]];
      if (!cur->is_object()) {
        throw std::invalid_argument("'" + consumed + "' has no sub-keys");
      }
    } else {
      json val = json::parse(raw, nullptr, /*allow_exceptions=*/false);
      if (val.is_discarded()) val = raw;  // bare string, e.g. variant=v1.4
      (*cur)[parts[i]] = val;
    }
  }
}

}  // namespace gossipsim
