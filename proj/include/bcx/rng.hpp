#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bcx {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a tuple of
/// counters (purpose tag, order, chunk index, ...). Results depend only on
/// the inputs, never on scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = splitmix64(master);
  for (auto t : tags) s = splitmix64(s ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return s;
}

/// Random stream with a platform-independent uniform mapping (53 high bits).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Purpose tags keep streams of different estimators disjoint.
namespace stream_tag {
inline constexpr std::uint64_t kAnchored = 1;
inline constexpr std::uint64_t kVolumeAverage = 2;
inline constexpr std::uint64_t kBulkAverage = 3;
inline constexpr std::uint64_t kPartitionFunction = 4;
inline constexpr std::uint64_t kBoundary = 5;
inline constexpr std::uint64_t kStability = 6;
inline constexpr std::uint64_t kVerify = 7;
}  // namespace stream_tag

}  // namespace bcx
