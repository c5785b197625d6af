#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ordstat {

// splitmix64 finalizer; decorrelates nearby keys.
std::uint64_t mix64(std::uint64_t x);

// Key for the independent substream identified by (seed, stream).
std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream);

// Standard normal sampler on top of mt19937_64. The engine sequence is fixed
// by the C++ standard and the Marsaglia polar transform is implemented here,
// so a given key always yields the same stream (std::normal_distribution
// leaves the transform implementation-defined).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t key) : eng_(key) {}

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal();
  void fill_normal(std::span<double> out);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ordstat
