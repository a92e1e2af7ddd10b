#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace fracpce {

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Derive a child seed from a parent and an ordered list of integer tags.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags);

/// Stable 64-bit hash of a string tag (FNV-1a), for naming sub-streams.
std::uint64_t hash_tag(std::string_view tag);

/// xoshiro256** seeded through SplitMix64. Output is identical on every
/// platform, unlike the std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0,1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via inverse CDF.
  double normal();

 private:
  std::uint64_t s_[4];
};

}  // namespace fracpce
