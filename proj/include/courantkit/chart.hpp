#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "courantkit/errors.hpp"

namespace ck {

// Deterministic 64-bit splitmix generator. Used for all sampling so reports are
// byte-identical across platforms (std::mt19937 + distributions are not portable).
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // uniform in [lo, hi)
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }
};

constexpr uint64_t kDefaultSeed = 0xC0FFEE;

// Deterministic FNV-1a string hash (std::hash is not portable across platforms).
inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

// A named coordinate chart with a fixed list of sample points. Immutable after
// construction; shared by pointer. Every symbolic object references one Chart.
class Chart {
 public:
  Chart(std::string name, std::vector<std::string> coords,
        std::vector<std::vector<double>> samples, std::optional<Box> box = std::nullopt);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<std::vector<double>>& samples() const { return samples_; }
  const std::optional<Box>& box() const { return box_; }

  // Chart samples followed by `extra` deterministic pseudo-random box points
  // (none when the chart has no box).
  std::vector<std::vector<double>> eval_points(int extra = 32,
                                               uint64_t seed = kDefaultSeed) const;

 private:
  std::string name_;
  std::vector<std::string> coords_;
  std::vector<std::vector<double>> samples_;
  std::optional<Box> box_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::string name, std::vector<std::string> coords,
                    std::vector<std::vector<double>> samples,
                    std::optional<Box> box = std::nullopt);

// n-dim chart with `count` deterministic samples inside the given box.
ChartPtr make_box_chart(std::string name, std::vector<std::string> coords, const Box& box,
                        int count = 10, uint64_t seed = kDefaultSeed);

}  // namespace ck
