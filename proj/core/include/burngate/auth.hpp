#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "burngate/clock.hpp"
#include "burngate/crypto.hpp"
#include "burngate/rng.hpp"

namespace burngate::auth {

using Nonce = std::array<std::uint8_t, 16>;
using Proof = std::array<std::uint8_t, 32>;

/// Key material derived client-side from the mnemonic seed. Only the
/// commitment ever reaches the server.
crypto::Key256 derive_auth_key(ByteView seed_entropy);
crypto::Digest commitment_of(const crypto::Key256& auth_key);

/// proof = auth_key XOR HMAC(commitment, nonce). The server recovers the
/// key from the proof and checks its hash against the stored commitment, so
/// a commitment alone can neither impersonate nor be replayed across nonces.
Proof make_proof(const crypto::Key256& auth_key, const Nonce& nonce);

struct AuthVerifier {
  std::string tenant_id;
  crypto::Digest commitment{};
};

struct AuthGrant {
  std::string token;  // opaque 128-bit handle, lowercase hex
  std::string tenant_id;
  std::uint64_t issued_at = 0;
  std::uint64_t expires_at = 0;
};

enum class RejectCause { unknown_tenant, stale_nonce, bad_proof };
const char* to_string(RejectCause cause);

/// The wire layer collapses every rejection to one uniform "authentication
/// failed"; the cause here feeds the tenant-scoped audit log only.
struct AuthDecision {
  bool granted = false;
  AuthGrant grant;
  RejectCause cause = RejectCause::bad_proof;
};

class AuthService {
 public:
  AuthService(const Clock& clock, Rng rng, std::uint64_t nonce_ttl_seconds);

  void put_verifier(AuthVerifier verifier);
  bool has_verifier(const std::string& tenant_id) const;

  /// Issues a nonce regardless of whether the tenant exists (no enumeration
  /// signal at challenge time).
  Nonce issue_nonce(const std::string& tenant_id);

  /// Consumes the nonce atomically: at most one call can ever succeed with a
  /// given nonce, even under concurrent attempts.
  AuthDecision authenticate(const std::string& tenant_id, const Nonce& nonce,
                            const Proof& proof);

  /// Grants for internal principals (operator/admin); skips the handshake.
  AuthGrant mint_grant(const std::string& tenant_id);

  std::optional<AuthGrant> lookup_grant(const std::string& token) const;
  bool grant_valid(const AuthGrant& grant) const;

  std::uint64_t nonce_ttl() const { return nonce_ttl_; }
  std::uint64_t grant_ttl() const { return nonce_ttl_ * 30; }

 private:
  struct PendingNonce {
    std::string tenant_id;
    std::uint64_t issued_at;
  };

  AuthGrant mint_grant_locked(const std::string& tenant_id);

  const Clock& clock_;
  mutable std::mutex mu_;
  Rng rng_;
  std::uint64_t nonce_ttl_;
  std::unordered_map<std::string, crypto::Digest> verifiers_;
  std::unordered_map<std::string, PendingNonce> nonces_;  // hex -> issue info
  std::unordered_map<std::string, AuthGrant> grants_;     // token -> grant
};

}  // namespace burngate::auth
