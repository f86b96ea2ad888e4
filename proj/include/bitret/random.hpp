#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace bitret {

inline constexpr const char* kRngId = "mt19937_64+splitmix64";

// Advances state and returns the next splitmix64 output.
std::uint64_t splitmix64(std::uint64_t& state);

// Independent seed for sub-stream `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Mersenne twister with portable derived distributions, so that a seed
// produces the same draws with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  int sign() { return (engine_() >> 63) ? -1 : 1; }
  bool bernoulli(double p) { return uniform() < p; }
  double exponential(double mean);
  double normal();

  // k distinct values from [0, n), in random order.
  std::vector<int> sample(int n, int k);

  template <typename It>
  void shuffle(It first, It last) {
    for (auto i = last - first; i > 1; --i) {
      auto j = static_cast<decltype(i)>(below(static_cast<std::uint64_t>(i)));
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bitret
