#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gossipsim/time.hpp"

namespace gossipsim {

// V1_2 adds IDONTWANT on top of V1_1; V1_4 adds PREAMBLE, IMRECEIVING
// and the IWANT restrictions on top of V1_2; Reduced is V1_2 with
// K-member forwarding plus immediate IHAVE. All additions apply to
// large messages only.
enum class ProtocolVariant : std::uint8_t { V1_1, V1_2, V1_4, Reduced };

const char* variant_name(ProtocolVariant v);
ProtocolVariant variant_from_string(const std::string& s);

struct MeshParams {
  int d = 8;
  int d_low = 6;
  int d_high = 12;
  int d_lazy = 6;
  int d_out = 3;  // D_low/2; unused with a static mesh, kept for config parity
  double gossip_factor = 0.05;
  SimTime heartbeat_interval = 700 * kMs;
  int k_reduced = 5;  // D_low - 1
  std::uint64_t large_threshold = 50'000;
  bool flood_publish = false;
  int known_peer_factor = 2;  // known-peer pool target, as a multiple of D

  void validate() const {
    if (!(d_low <= d && d <= d_high)) {
      throw std::invalid_argument("mesh: require d_low <= d <= d_high");
    }
    if (k_reduced > d) throw std::invalid_argument("mesh: require k <= d");
    if (gossip_factor < 0.0 || gossip_factor > 1.0) {
      throw std::invalid_argument("mesh: gossip_factor in [0,1]");
    }
    if (heartbeat_interval <= 0) {
      throw std::invalid_argument("mesh: heartbeat_interval > 0");
    }
  }
};

struct ProtocolConfig {
  // PREAMBLE processing delay before IMRECEIVING emission starts.
  SimTime preamble_delta = 1 * kMs;
  // Conservative transfer-duration estimate:
  // safety * length*8/min_rate + 2*max_latency.
  double estimate_safety = 1.5;
  std::int64_t estimate_min_rate_bps = 50'000'000;
  SimTime estimate_max_latency = 130 * kMs;
  double penalty_stalled = -10.0;
  double penalty_iwant_ignored = -10.0;
  // Concurrent outstanding IWANTs per message under v1.1/v1.2.
  int max_iwant_retries = 3;
  // Deadline length assumption when the real length is unknown; sized so
  // honest repliers with a busy uplink do not get penalized.
  std::uint64_t iwant_assumed_length = 2'000'000;
  SimTime cache_ttl = 30 * kSec;
  int gossip_window_heartbeats = 3;
  bool push_fallback = true;
};

enum class AdversaryKind : std::uint8_t { None, StallingPreamble, IwantSilent };

const char* adversary_name(AdversaryKind k);
AdversaryKind adversary_from_string(const std::string& s);

struct AdversaryProfile {
  AdversaryKind kind = AdversaryKind::None;
  double fraction = 0.0;

  void validate() const {
    if (fraction < 0.0 || fraction > 0.5) {
      throw std::invalid_argument("adversary: fraction in [0, 0.5]");
    }
  }
};

}  // namespace gossipsim
