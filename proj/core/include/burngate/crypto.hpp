#pragma once

#include <array>
#include <optional>

#include "burngate/common.hpp"

namespace burngate::crypto {

using Digest = std::array<std::uint8_t, 32>;
using Key256 = std::array<std::uint8_t, 32>;
using Nonce96 = std::array<std::uint8_t, 12>;
using Tag128 = std::array<std::uint8_t, 16>;

Digest sha256(ByteView data);
Digest hmac_sha256(ByteView key, ByteView message);

/// RFC 5869 HKDF-SHA256 with a single 32-byte output block. An empty salt
/// means the all-zero salt, matching the RFC default.
Key256 hkdf_sha256(ByteView ikm, ByteView info, ByteView salt = {});

struct Sealed {
  Bytes ciphertext;  // same length as the plaintext
  Tag128 tag;
};

/// AES-256-GCM. The associated data is authenticated but not encrypted.
Sealed aead_seal(const Key256& key, const Nonce96& nonce, ByteView aad,
                 ByteView plaintext);
std::optional<Bytes> aead_open(const Key256& key, const Nonce96& nonce,
                               ByteView aad, ByteView ciphertext,
                               const Tag128& tag);

bool ct_equal(ByteView a, ByteView b);
void secure_wipe(std::span<std::uint8_t> data);

}  // namespace burngate::crypto
