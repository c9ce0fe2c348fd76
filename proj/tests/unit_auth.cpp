#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <thread>

#include "burngate/auth.hpp"
#include "burngate/common.hpp"

using namespace burngate;
using namespace burngate::auth;

namespace {
struct Fixture {
  SimClock clock{1000};
  AuthService service{clock, Rng(11), 60};

  crypto::Key256 enroll(const std::string& tenant, std::uint8_t fill) {
    std::array<std::uint8_t, 16> entropy{};
    entropy.fill(fill);
    crypto::Key256 key = derive_auth_key(entropy);
    service.put_verifier({tenant, commitment_of(key)});
    return key;
  }
};
}  // namespace

// Chain frozen from an independent reference: zero entropy -> auth key ->
// commitment -> proof over the 000102..0f nonce.
TEST_CASE("derivation chain matches the frozen vectors") {
  std::array<std::uint8_t, 16> entropy{};
  crypto::Key256 key = derive_auth_key(entropy);
  CHECK(to_hex(key) ==
        "ca50001936420b241efddf6a3655bf00157213c226abac8cb1053c682e56ce70");
  CHECK(to_hex(commitment_of(key)) ==
        "8d5fcb425add1b8ed181e8984175acd2988968d003a94e8dc721be7682f33037");
  Nonce nonce{};
  for (int i = 0; i < 16; ++i) nonce[i] = static_cast<std::uint8_t>(i);
  CHECK(to_hex(make_proof(key, nonce)) ==
        "4d69c5465e8c2f8876deb4593eb6528bb67fec2dae98bce81452c297b0dbb339");
}

TEST_CASE("correct proof over a fresh nonce grants") {
  Fixture f;
  auto key = f.enroll("H", 0xAA);
  Nonce nonce = f.service.issue_nonce("H");
  auto decision = f.service.authenticate("H", nonce, make_proof(key, nonce));
  REQUIRE(decision.granted);
  CHECK(decision.grant.tenant_id == "H");
  CHECK(decision.grant.expires_at == 1000 + 60 * 30);
  CHECK(f.service.lookup_grant(decision.grant.token).has_value());
}

TEST_CASE("replaying a nonce is rejected as stale") {
  Fixture f;
  auto key = f.enroll("H", 0xAA);
  Nonce nonce = f.service.issue_nonce("H");
  Proof proof = make_proof(key, nonce);
  CHECK(f.service.authenticate("H", nonce, proof).granted);
  auto replay = f.service.authenticate("H", nonce, proof);
  CHECK(!replay.granted);
  CHECK(replay.cause == RejectCause::stale_nonce);
}

TEST_CASE("nonce expires after its ttl") {
  Fixture f;
  auto key = f.enroll("H", 0xAA);
  Nonce nonce = f.service.issue_nonce("H");
  f.clock.advance(61);
  auto decision = f.service.authenticate("H", nonce, make_proof(key, nonce));
  CHECK(!decision.granted);
  CHECK(decision.cause == RejectCause::stale_nonce);
}

TEST_CASE("proof from another tenant's seed is a bad proof") {
  Fixture f;
  f.enroll("H", 0xAA);
  auto other_key = f.enroll("F", 0xBB);
  Nonce nonce = f.service.issue_nonce("H");
  auto decision = f.service.authenticate("H", nonce, make_proof(other_key, nonce));
  CHECK(!decision.granted);
  CHECK(decision.cause == RejectCause::bad_proof);
}

TEST_CASE("flipping any proof bit rejects") {
  Fixture f;
  auto key = f.enroll("H", 0xAA);
  for (int byte : {0, 13, 31}) {
    Nonce nonce = f.service.issue_nonce("H");
    Proof proof = make_proof(key, nonce);
    proof[byte] ^= 0x40;
    CHECK(!f.service.authenticate("H", nonce, proof).granted);
  }
}

TEST_CASE("unknown tenant is rejected with the cause recorded") {
  Fixture f;
  std::array<std::uint8_t, 16> entropy{};
  crypto::Key256 key = derive_auth_key(entropy);
  Nonce nonce = f.service.issue_nonce("ghost");
  auto decision = f.service.authenticate("ghost", nonce, make_proof(key, nonce));
  CHECK(!decision.granted);
  CHECK(decision.cause == RejectCause::unknown_tenant);
}

TEST_CASE("a nonce issued for one tenant cannot prove another") {
  Fixture f;
  auto key = f.enroll("H", 0xAA);
  f.enroll("F", 0xBB);
  Nonce nonce = f.service.issue_nonce("F");
  auto decision = f.service.authenticate("H", nonce, make_proof(key, nonce));
  CHECK(!decision.granted);
}

TEST_CASE("exactly one concurrent authenticate consumes a nonce") {
  Fixture f;
  auto key = f.enroll("H", 0xAA);
  for (int round = 0; round < 20; ++round) {
    Nonce nonce = f.service.issue_nonce("H");
    Proof proof = make_proof(key, nonce);
    std::atomic<int> granted{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&] {
        if (f.service.authenticate("H", nonce, proof).granted) ++granted;
      });
    }
    for (auto& t : threads) t.join();
    CHECK(granted.load() == 1);
  }
}

TEST_CASE("grants expire with the clock") {
  Fixture f;
  auto grant = f.service.mint_grant("H");
  CHECK(f.service.grant_valid(grant));
  f.clock.advance(60 * 30);
  CHECK(!f.service.grant_valid(grant));
}
