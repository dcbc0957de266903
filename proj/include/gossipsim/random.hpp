#pragma once
#include <cstdint>
#include <vector>

namespace gossipsim {

// Seeded deterministic generator (splitmix64). Identical seed plus
// identical call sequence yields identical output on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Scaled draw in [0, n). Bias is negligible for simulation use.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Independent derived stream. Per-node streams keep node behavior
  // independent of event interleaving elsewhere in the run.
  RandomSource derive(std::uint64_t salt) const {
    RandomSource r(state_ ^ (0x2545f4914f6cdd1dULL * (salt + 0x9e3779b97f4a7c15ULL)));
    r.next();
    return r;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[bounded(i)]);
    }
  }

  // Uniform subset of size min(k, pool.size()).
  template <typename T>
  std::vector<T> sample(const std::vector<T>& pool, std::size_t k) {
    std::vector<T> v = pool;
    if (k >= v.size()) {
      shuffle(v);
      return v;
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(v[i], v[i + bounded(v.size() - i)]);
    }
    v.resize(k);
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace gossipsim
