#include <doctest.h>

#include "gossipsim/metrics.hpp"

using namespace gossipsim;

namespace {

DataMessage msg(NodeId pub, std::uint32_t seq, std::uint64_t len,
                bool warmup = false) {
  DataMessage m;
  m.publisher = pub;
  m.seq_no = seq;
  m.id = make_msg_id(pub, seq);
  m.length = len;
  m.is_warmup = warmup;
  return m;
}

}  // namespace

TEST_CASE("avg_duplicates is the double-sum formula") {
  Metrics m;
  m.set_n_nodes(4);
  auto a = msg(0, 0, 100);
  auto b = msg(1, 0, 100);
  m.register_message(a, 0);
  m.register_message(b, 0);
  // Message a: 3 duplicates total, message b: 1.
  m.record_duplicate(a.id, 1, 124, false);
  m.record_duplicate(a.id, 1, 124, false);
  m.record_duplicate(a.id, 2, 124, false);
  m.record_duplicate(b.id, 3, 124, false);
  // (3 + 1) / (4 nodes * 2 messages)
  CHECK(m.avg_duplicates() == doctest::Approx(0.5));
}

TEST_CASE("warmup messages are excluded from aggregate stats") {
  Metrics m;
  m.set_n_nodes(2);
  auto w = msg(0, 0, 100, true);
  auto r = msg(0, 1, 100);
  m.register_message(w, 0);
  m.register_message(r, 1000);
  m.record_duplicate(w.id, 1, 124, false);
  m.record_first_delivery(r.id, 1, 5000);
  CHECK(m.avg_duplicates() == doctest::Approx(0.0));
  REQUIRE(m.latency_l_cov_ms().has_value());
  CHECK(*m.latency_l_cov_ms() == doctest::Approx(4.0));
}

TEST_CASE("latency is empty until every non-warmup message covers all nodes") {
  Metrics m;
  m.set_n_nodes(3);
  auto a = msg(0, 0, 100);
  m.register_message(a, 0);
  m.record_first_delivery(a.id, 1, 100);
  CHECK_FALSE(m.latency_l_cov_ms().has_value());
  CHECK_FALSE(m.full_coverage());
  m.record_first_delivery(a.id, 2, 300);
  CHECK(m.full_coverage());
  CHECK(*m.latency_l_cov_ms() == doctest::Approx(0.3));
}

TEST_CASE("duplicate delivery reclassifies bytes unless it was a pull reply") {
  Metrics m;
  m.set_n_nodes(2);
  auto a = msg(0, 0, 100);
  m.register_message(a, 0);
  m.record_send_bytes(ByteCategory::Data, 124);
  m.record_send_bytes(ByteCategory::IwantReply, 124);
  const auto before = m.total_bytes();

  m.record_duplicate(a.id, 1, 124, false);
  CHECK(m.bytes(ByteCategory::Data) == 0);
  CHECK(m.bytes(ByteCategory::DataDuplicate) == 124);

  m.record_duplicate(a.id, 1, 124, true);
  CHECK(m.bytes(ByteCategory::IwantReply) == 124);  // untouched
  CHECK(m.total_bytes() == before);                 // reclassified, not added
  CHECK(m.iwant_reply_share() == doctest::Approx(0.5));
}

TEST_CASE("temporal spread bins conserve deliveries and exclude the publisher") {
  Metrics m;
  m.set_n_nodes(5);
  auto a = msg(0, 0, 100);
  m.register_message(a, 1000 * kMs);
  m.record_first_delivery(a.id, 1, 1050 * kMs);
  m.record_first_delivery(a.id, 2, 1150 * kMs);
  m.record_first_delivery(a.id, 3, 1150 * kMs);
  m.record_first_delivery(a.id, 4, 1420 * kMs);
  auto rows = m.temporal_spread(100 * kMs);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].dissemination_time == 420 * kMs);
  std::uint32_t sum = 0;
  for (auto c : rows[0].bins) sum += c;
  CHECK(sum == 4);  // N - 1
  CHECK(rows[0].bins[0] == 1);
  CHECK(rows[0].bins[1] == 2);
  CHECK(rows[0].bins[4] == 1);
}

TEST_CASE("trace hash is order sensitive and reproducible") {
  Metrics a, b, c;
  a.trace(TraceKind::SendData, 1, 2, 99, 10);
  a.trace(TraceKind::DeliverFirst, 2, 1, 99, 20);
  b.trace(TraceKind::SendData, 1, 2, 99, 10);
  b.trace(TraceKind::DeliverFirst, 2, 1, 99, 20);
  c.trace(TraceKind::DeliverFirst, 2, 1, 99, 20);
  c.trace(TraceKind::SendData, 1, 2, 99, 10);
  CHECK(a.trace_hash() == b.trace_hash());
  CHECK(a.trace_hash() != c.trace_hash());
}

TEST_CASE("shortfall report names undelivered messages") {
  Metrics m;
  m.set_n_nodes(3);
  auto a = msg(7, 2, 100);
  m.register_message(a, 0);
  auto rep = m.shortfall_report();
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].find("7:2") != std::string::npos);
  CHECK(rep[0].find("1/3") != std::string::npos);
}
