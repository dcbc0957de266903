#pragma once
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gossipsim/scenario.hpp"

namespace gossipsim {

// One summary line per run. Column set and order are stable; downstream
// tooling may key on them.
struct SummaryRow {
  std::string variant;
  std::uint32_t n_nodes = 0;
  std::uint32_t n_publishers = 0;
  std::uint64_t message_size_bytes = 0;
  std::uint64_t seed = 0;
  std::optional<double> latency_ms;  // empty when coverage fell short
  std::uint64_t bandwidth_bytes = 0;
  double avg_duplicates = 0.0;
  std::uint64_t iwant_requests = 0;
  double iwant_reply_share = 0.0;
};

SummaryRow make_summary(const Simulation& sim, const RunResult& res);

// Fixed-precision number rendering so identical runs emit identical
// bytes on every platform.
std::string format_double(double v);

std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& r);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

// Per-message dissemination histogram: 100 ms bins of first deliveries.
void write_temporal_csv(std::ostream& out, const Metrics& metrics,
                        SimTime bin = 100 * kMs);

// Full per-run detail: config echo, per-message stats, byte categories,
// peer scores, roles, trace hash.
nlohmann::json detail_json(const Simulation& sim, const RunResult& res);

}  // namespace gossipsim
