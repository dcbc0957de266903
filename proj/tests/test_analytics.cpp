#include <doctest.h>

#include "gossipsim/analytics.hpp"

using namespace gossipsim;

TEST_CASE("duplicate bounds for the default mesh degree") {
  auto b = duplicate_bounds(8);
  CHECK(b.lower == doctest::Approx(3.0));
  CHECK(b.upper == doctest::Approx(6.0));
  CHECK_THROWS_AS(duplicate_bounds(1), std::invalid_argument);
}

TEST_CASE("round model: rounds is ceil(log_D N)") {
  auto m = round_model(1500, 8, 0, 1);
  CHECK(m.rounds == 4);  // 8^3 = 512 < 1500 <= 8^4
  CHECK(m.tx_in_round == 8);
  CHECK(round_model(8, 8, 0, 1).rounds == 1);
  CHECK(round_model(9, 8, 0, 1).rounds == 2);
  CHECK(round_model(1, 8, 0, 1).rounds == 0);
}

TEST_CASE("round model: transmissions scale by (D-1)^(X-1)") {
  CHECK(round_model(1500, 8, 0, 2).tx_in_round == 7 * 8);
  CHECK(round_model(1500, 8, 0, 3).tx_in_round == 7 * 7 * 8);
  // Floodpublish adds F first-round targets.
  CHECK(round_model(1500, 8, 4, 1).tx_in_round == 12);
}

TEST_CASE("cumulative delay model accumulates per hop") {
  // D=8, 1 MB at 100 Mbps: per-hop serialization 8*80 ms = 640 ms.
  auto m1 = cumulative_delay_model(8, 1'000'000, 100'000'000, 1, 100 * kMs);
  CHECK(m1.delta_tx == 640 * kMs);
  CHECK(m1.tau_n == 740 * kMs);
  auto m3 = cumulative_delay_model(8, 1'000'000, 100'000'000, 3, 100 * kMs);
  CHECK(m3.delta_tx == 3 * 640 * kMs);
  CHECK(m3.tau_n == 3 * 640 * kMs + 3 * 100 * kMs);
  CHECK_THROWS_AS(cumulative_delay_model(8, 1, 100, 0, 0),
                  std::invalid_argument);
}
