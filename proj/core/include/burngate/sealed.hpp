#pragma once

#include <optional>

#include "burngate/timekey.hpp"

namespace burngate::timekey {

/// Wire layout: "BAU1" || window(16) || context_id(16) || nonce(12) ||
/// ciphertext || tag(16). The whole 48-byte prefix is the AEAD associated
/// data, so tampering any header byte fails unsealing.
struct SealedDocument {
  TemporalWindow window;
  ContextId context;
  crypto::Nonce96 nonce{};
  Bytes ciphertext;
  crypto::Tag128 tag{};

  Bytes encode() const;
  static std::optional<SealedDocument> decode(ByteView bytes);
};

inline constexpr char kSealedMagic[4] = {'B', 'A', 'U', '1'};

/// Fresh nonce per call from `nonce_source`; two seals of the same plaintext
/// never share ciphertext bytes.
SealedDocument seal(ByteView plaintext, ByteView seed,
                    const TemporalWindow& window, const ContextId& context,
                    Rng& nonce_source);

struct UnsealOutcome {
  enum class Status { ok, expired, not_yet_valid, integrity_failure, seed_destroyed };
  Status status = Status::integrity_failure;
  Bytes plaintext;

  bool ok() const { return status == Status::ok; }
};

/// Expired wins over everything once now >= window end; integrity covers
/// wrong seed, wrong context and any bit flip in header or body.
UnsealOutcome unseal(const SealedDocument& doc, ByteView seed,
                     std::uint64_t now);
UnsealOutcome unseal(const SealedDocument& doc, const SeedHolder& holder,
                     std::uint64_t now);

}  // namespace burngate::timekey
