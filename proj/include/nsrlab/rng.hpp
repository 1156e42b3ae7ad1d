#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace nsrlab {

// Deterministic, splittable random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Seeds are mixed through SplitMix64 and child streams are derived
// from (seed, tag) with an FNV-1a hash, so nothing depends on
// implementation-defined std:: distributions or std::hash.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64";

  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  RngStream split(std::string_view tag) const;
  RngStream split(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in the closed range [lo, hi]; unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via the Marsaglia polar method.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nsrlab
