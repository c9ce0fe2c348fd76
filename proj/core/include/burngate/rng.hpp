#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace burngate {

/// xoshiro256** seeded through splitmix64. Self-contained so that seeded
/// scenario runs produce identical byte streams on every platform, which the
/// report-determinism guarantee depends on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, bound) by rejection sampling; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  void fill(std::span<std::uint8_t> out);
  std::string alnum(std::size_t length);

  /// Fresh engine keyed off this one; lets sub-tasks draw independently.
  Rng fork();

 private:
  std::uint64_t s_[4];
};

/// OS entropy for production key material (nonces, credentials, seeds).
void os_random(std::span<std::uint8_t> out);

}  // namespace burngate
