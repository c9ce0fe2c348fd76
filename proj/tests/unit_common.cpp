#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "burngate/common.hpp"
#include "burngate/crypto.hpp"
#include "burngate/rng.hpp"

using namespace burngate;

TEST_CASE("hex round trip") {
  Bytes data = {0x00, 0x01, 0xab, 0xff};
  CHECK(to_hex(data) == "0001abff");
  CHECK(*from_hex("0001abff") == data);
  CHECK(*from_hex("0001ABFF") == data);
  CHECK(!from_hex("abc"));    // odd length
  CHECK(!from_hex("zz"));     // bad digit
}

TEST_CASE("base64 round trip over random blobs") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Bytes blob(rng.below(64));
    rng.fill(blob);
    auto decoded = base64_decode(base64_encode(blob));
    REQUIRE(decoded);
    CHECK(*decoded == blob);
  }
  CHECK(!base64_decode("a==="));
  CHECK(!base64_decode("ab=a"));
}

TEST_CASE("sha256 matches the published test vector") {
  auto digest = crypto::sha256(as_bytes("abc"));
  CHECK(to_hex(digest) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hmac-sha256 matches rfc 4231 case 2") {
  auto mac = crypto::hmac_sha256(as_bytes("Jefe"),
                                 as_bytes("what do ya want for nothing?"));
  CHECK(to_hex(mac) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST_CASE("aead seal/open round trip and tamper rejection") {
  crypto::Key256 key{};
  key[0] = 0x42;
  crypto::Nonce96 nonce{};
  Bytes aad = {1, 2, 3};
  auto sealed = crypto::aead_seal(key, nonce, aad, as_bytes("hello world"));
  CHECK(sealed.ciphertext.size() == 11);

  auto opened = crypto::aead_open(key, nonce, aad, sealed.ciphertext, sealed.tag);
  REQUIRE(opened);
  CHECK(to_string(*opened) == "hello world");

  auto tampered = sealed.ciphertext;
  tampered[3] ^= 0x01;
  CHECK(!crypto::aead_open(key, nonce, aad, tampered, sealed.tag));
  Bytes other_aad = {9};
  CHECK(!crypto::aead_open(key, nonce, other_aad, sealed.ciphertext, sealed.tag));
}

TEST_CASE("deterministic rng replays identically and forks diverge") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(1234);
  Rng fork1 = c.fork();
  Rng fork2 = c.fork();
  CHECK(fork1.next_u64() != fork2.next_u64());

  Rng d(99);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t v = d.below(17);
    CHECK(v < 17);
  }
  CHECK(d.alnum(24).size() == 24);
}

TEST_CASE("secure_wipe zeroes the buffer") {
  Bytes secret = {1, 2, 3, 4};
  crypto::secure_wipe(secret);
  CHECK(secret == Bytes{0, 0, 0, 0});
}
