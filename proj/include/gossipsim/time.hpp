#pragma once
#include <cmath>
#include <cstdint>

namespace gossipsim {

// Virtual time in microseconds. Integer arithmetic keeps event ordering
// free of floating point drift; 1 us resolves the finest timing quantity
// the transfer model produces.
using SimTime = std::int64_t;
using NodeId = std::uint32_t;

constexpr SimTime kUs = 1;
constexpr SimTime kMs = 1000;
constexpr SimTime kSec = 1'000'000;

inline SimTime from_ms(double v) {
  return static_cast<SimTime>(std::llround(v * 1000.0));
}
inline double to_ms(SimTime t) { return static_cast<double>(t) / 1000.0; }

}  // namespace gossipsim
