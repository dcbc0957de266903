#pragma once
#include <cstdint>
#include <stdexcept>

#include "gossipsim/time.hpp"

namespace gossipsim {

// Closed-form dissemination arithmetic for sanity checks against the
// event-driven results.

// d_min = D/2 - 1 (every link traversed once), d_max = D - 2 (every
// receiver re-sends to D-1 peers).
struct DuplicateBounds {
  double lower = 0;
  double upper = 0;
};
inline DuplicateBounds duplicate_bounds(int d) {
  if (d < 2) throw std::invalid_argument("duplicate_bounds: D >= 2");
  return {static_cast<double>(d) / 2.0 - 1.0, static_cast<double>(d) - 2.0};
}

// rounds = ceil(log_D(N)); transmissions in round X are
// (D-1)^(X-1) * (F+D), where F counts extra floodpublish targets.
struct RoundModel {
  int rounds = 0;
  std::uint64_t tx_in_round = 0;
};
inline RoundModel round_model(std::uint64_t n, int d, int f, int x) {
  if (n < 1 || d < 2 || x < 1) throw std::invalid_argument("round_model");
  int rounds = 0;
  std::uint64_t reach = 1;
  while (reach < n) {
    reach *= static_cast<std::uint64_t>(d);
    ++rounds;
  }
  std::uint64_t tx = static_cast<std::uint64_t>(f + d);
  for (int i = 1; i < x; ++i) tx *= static_cast<std::uint64_t>(d - 1);
  return {rounds, tx};
}

// Store-and-forward accumulation over the longest path:
// delta_tx = (D*S*8/R)*h, tau_N = delta_tx + tau_p*h.
struct DelayModel {
  SimTime delta_tx = 0;
  SimTime tau_n = 0;
};
inline DelayModel cumulative_delay_model(int d, std::uint64_t size_bytes,
                                         std::int64_t rate_bps, int hops,
                                         SimTime tau_p) {
  if (hops < 1 || rate_bps <= 0) {
    throw std::invalid_argument("cumulative_delay_model");
  }
  const std::int64_t bits_us = static_cast<std::int64_t>(size_bytes) * 8 * 1'000'000;
  const SimTime per_hop = static_cast<SimTime>(d) * ((bits_us + rate_bps / 2) / rate_bps);
  DelayModel m;
  m.delta_tx = per_hop * hops;
  m.tau_n = m.delta_tx + tau_p * hops;
  return m;
}

}  // namespace gossipsim
