#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

#include "burngate/common.hpp"
#include "burngate/crypto.hpp"
#include "burngate/rng.hpp"

namespace burngate::timekey {

/// Half-open validity interval [start, start + duration).
struct TemporalWindow {
  std::uint64_t start = 0;
  std::uint64_t duration = 0;

  /// Throws DomainError on zero duration or start+duration overflow.
  static TemporalWindow make(std::uint64_t start, std::uint64_t duration);

  std::uint64_t end() const { return start + duration; }
  bool contains(std::uint64_t now) const { return now >= start && now < end(); }

  /// Big-endian start || big-endian duration, 16 bytes, bit-exact.
  std::array<std::uint8_t, 16> canonical() const;
  static std::optional<TemporalWindow> from_canonical(ByteView bytes);

  bool operator==(const TemporalWindow&) const = default;
};

struct ContextId {
  std::array<std::uint8_t, 16> id{};

  static ContextId random(Rng& rng);
  static std::optional<ContextId> from_hex(std::string_view hex);
  std::string hex() const;

  bool operator==(const ContextId&) const = default;
};

struct TimeKey {
  crypto::Key256 key{};
  TemporalWindow window;
  ContextId context;
};

/// Deterministic key bound to (seed, window, context): HKDF-SHA256 with the
/// window's canonical form and the context id in the info block.
TimeKey derive_time_key(ByteView seed, const TemporalWindow& window,
                        const ContextId& context);

struct DestructionReceipt {
  std::uint64_t destroyed_at = 0;
  bool already_destroyed = false;
};

/// Owns the derivation seed for one session. destroy() wipes the bytes and
/// is linearizable with concurrent derive() calls: a racing derive yields
/// either a valid key or nothing, never partial bytes.
class SeedHolder {
 public:
  explicit SeedHolder(const crypto::Key256& seed);
  SeedHolder(const SeedHolder&) = delete;
  SeedHolder& operator=(const SeedHolder&) = delete;
  ~SeedHolder();

  std::optional<TimeKey> derive(const TemporalWindow& window,
                                const ContextId& context) const;
  std::optional<crypto::Key256> seed() const;
  DestructionReceipt destroy(std::uint64_t now);
  bool destroyed() const;

 private:
  mutable std::mutex mu_;
  crypto::Key256 seed_;
  bool live_ = true;
  std::uint64_t destroyed_at_ = 0;
};

}  // namespace burngate::timekey
