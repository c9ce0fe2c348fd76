#include "burngate/auth.hpp"

#include "burngate/common.hpp"

namespace burngate::auth {

namespace {
constexpr std::string_view kAuthLabel = "auth-v1";
}

crypto::Key256 derive_auth_key(ByteView seed_entropy) {
  return crypto::hkdf_sha256(seed_entropy, as_bytes(kAuthLabel));
}

crypto::Digest commitment_of(const crypto::Key256& auth_key) {
  return crypto::sha256(auth_key);
}

Proof make_proof(const crypto::Key256& auth_key, const Nonce& nonce) {
  crypto::Digest mask = crypto::hmac_sha256(commitment_of(auth_key), nonce);
  Proof proof{};
  for (std::size_t i = 0; i < proof.size(); ++i) {
    proof[i] = auth_key[i] ^ mask[i];
  }
  return proof;
}

const char* to_string(RejectCause cause) {
  switch (cause) {
    case RejectCause::unknown_tenant: return "unknown_tenant";
    case RejectCause::stale_nonce: return "stale_nonce";
    case RejectCause::bad_proof: return "bad_proof";
  }
  return "?";
}

AuthService::AuthService(const Clock& clock, Rng rng,
                         std::uint64_t nonce_ttl_seconds)
    : clock_(clock), rng_(std::move(rng)), nonce_ttl_(nonce_ttl_seconds) {}

void AuthService::put_verifier(AuthVerifier verifier) {
  std::lock_guard lock(mu_);
  verifiers_[verifier.tenant_id] = verifier.commitment;
}

bool AuthService::has_verifier(const std::string& tenant_id) const {
  std::lock_guard lock(mu_);
  return verifiers_.count(tenant_id) > 0;
}

Nonce AuthService::issue_nonce(const std::string& tenant_id) {
  std::lock_guard lock(mu_);
  Nonce nonce{};
  rng_.fill(nonce);
  nonces_[to_hex(nonce)] = PendingNonce{tenant_id, clock_.now()};
  return nonce;
}

AuthDecision AuthService::authenticate(const std::string& tenant_id,
                                       const Nonce& nonce,
                                       const Proof& proof) {
  std::lock_guard lock(mu_);
  AuthDecision decision;

  // Consume first: whatever happens below, this nonce is spent.
  auto nit = nonces_.find(to_hex(nonce));
  bool nonce_ok = false;
  if (nit != nonces_.end()) {
    nonce_ok = nit->second.tenant_id == tenant_id &&
               clock_.now() <= nit->second.issued_at + nonce_ttl_;
    nonces_.erase(nit);
  }
  if (!nonce_ok) {
    decision.cause = RejectCause::stale_nonce;
    return decision;
  }

  auto vit = verifiers_.find(tenant_id);
  if (vit == verifiers_.end()) {
    decision.cause = RejectCause::unknown_tenant;
    return decision;
  }
  const crypto::Digest& commitment = vit->second;

  crypto::Digest mask = crypto::hmac_sha256(commitment, nonce);
  crypto::Key256 recovered{};
  for (std::size_t i = 0; i < recovered.size(); ++i) {
    recovered[i] = proof[i] ^ mask[i];
  }
  if (!crypto::ct_equal(crypto::sha256(recovered), commitment)) {
    decision.cause = RejectCause::bad_proof;
    return decision;
  }

  decision.granted = true;
  decision.grant = mint_grant_locked(tenant_id);
  return decision;
}

AuthGrant AuthService::mint_grant(const std::string& tenant_id) {
  std::lock_guard lock(mu_);
  return mint_grant_locked(tenant_id);
}

AuthGrant AuthService::mint_grant_locked(const std::string& tenant_id) {
  std::array<std::uint8_t, 16> token{};
  rng_.fill(token);
  AuthGrant grant;
  grant.token = to_hex(token);
  grant.tenant_id = tenant_id;
  grant.issued_at = clock_.now();
  grant.expires_at = grant.issued_at + grant_ttl();
  grants_[grant.token] = grant;
  return grant;
}

std::optional<AuthGrant> AuthService::lookup_grant(
    const std::string& token) const {
  std::lock_guard lock(mu_);
  auto it = grants_.find(token);
  if (it == grants_.end()) return std::nullopt;
  if (clock_.now() >= it->second.expires_at) return std::nullopt;
  return it->second;
}

bool AuthService::grant_valid(const AuthGrant& grant) const {
  auto found = lookup_grant(grant.token);
  return found && found->tenant_id == grant.tenant_id;
}

}  // namespace burngate::auth
