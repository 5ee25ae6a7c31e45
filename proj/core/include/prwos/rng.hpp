#pragma once

#include <array>
#include <cstdint>

#include "prwos/geometry.hpp"

namespace prwos {

// Philox4x64-10 block function (Salmon et al., Random123). Exposed for the
// known-answer tests.
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;
PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key);

// Identifies an independent stream. Trajectories use nest_level 0; nested
// continuation walks use nest_level 1 with nest_id counting within the
// parent trajectory; other small levels are reserved for auxiliary draws
// (starting points, medium realizations).
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t path_id = 0;
  std::uint32_t nest_level = 0;
  std::uint64_t nest_id = 0;
};

inline constexpr std::uint32_t kNestTrajectory = 0;
inline constexpr std::uint32_t kNestContinuation = 1;
inline constexpr std::uint32_t kNestStartPoint = 2;

// Counter-based stream: key = (seed, path_id), counter = (block, nest_id,
// nest_level, 0). Creation is O(1) and streams never share state.
class Stream {
 public:
  explicit Stream(const StreamKey& key);

  std::uint64_t next_u64();
  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  const StreamKey& key() const { return key_; }

 private:
  void refill();

  StreamKey key_;
  PhiloxKey philox_key_;
  PhiloxCounter counter_;
  PhiloxCounter buffer_{};
  unsigned used_ = 4;
};

inline Stream derive(const StreamKey& key) { return Stream(key); }

// Uniform direction on the unit circle.
Point isotropic_unit_vector(Stream& s);

}  // namespace prwos
