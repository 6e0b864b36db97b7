#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace lexvis {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent sub-seed for stream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master;
  std::uint64_t v = 0;
  for (std::uint64_t i = 0; i <= index; ++i) v = splitmix64(state);
  return v;
}

// Deterministic RNG. Distributions are implemented by hand because the
// standard library's distribution objects are implementation-defined;
// every draw here is fully pinned by the seed and the call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; two draws per value.
  double normal() {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 == 0.0);
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Uniform integer in [0, n) via multiply-shift.
  std::size_t bounded(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = bounded(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lexvis
