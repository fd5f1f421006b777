#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace smdtn {

/// A reproducible random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the mappings to doubles and bounded
/// integers are done here so results do not depend on the library's
/// distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state_seed) : engine_(state_seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer on [0, bound), bound > 0. Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Independent stream for `purpose` derived by hashing (seed, purpose).
RngStream rng_stream(std::uint64_t seed, std::string_view purpose);

}  // namespace smdtn
