#include "burngate/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <memory>
#include <stdexcept>

namespace burngate::crypto {

namespace {
struct CipherCtxFree {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

[[noreturn]] void fail(const char* what) { throw std::runtime_error(what); }
}  // namespace

Digest sha256(ByteView data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    fail("sha256 failed");
  }
  return out;
}

Digest hmac_sha256(ByteView key, ByteView message) {
  Digest out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           message.data(), message.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
    fail("hmac-sha256 failed");
  }
  return out;
}

Key256 hkdf_sha256(ByteView ikm, ByteView info, ByteView salt) {
  static constexpr std::uint8_t kZeroSalt[32] = {};
  ByteView effective_salt = salt.empty() ? ByteView{kZeroSalt} : salt;
  Digest prk = hmac_sha256(effective_salt, ikm);

  Bytes block(info.begin(), info.end());
  block.push_back(0x01);
  return hmac_sha256(prk, block);
}

Sealed aead_seal(const Key256& key, const Nonce96& nonce, ByteView aad,
                 ByteView plaintext) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) fail("EVP_CIPHER_CTX_new failed");
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce.data()) != 1) {
    fail("gcm init failed");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1) {
    fail("gcm aad failed");
  }
  Sealed out;
  out.ciphertext.resize(plaintext.size());
  if (EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len,
                        plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1) {
    fail("gcm encrypt failed");
  }
  int fin = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + len, &fin) != 1) {
    fail("gcm final failed");
  }
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG,
                          static_cast<int>(out.tag.size()),
                          out.tag.data()) != 1) {
    fail("gcm get tag failed");
  }
  return out;
}

std::optional<Bytes> aead_open(const Key256& key, const Nonce96& nonce,
                               ByteView aad, ByteView ciphertext,
                               const Tag128& tag) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) fail("EVP_CIPHER_CTX_new failed");
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce.data()) != 1) {
    fail("gcm init failed");
  }
  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1) {
    fail("gcm aad failed");
  }
  Bytes plaintext(ciphertext.size());
  if (EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, ciphertext.data(),
                        static_cast<int>(ciphertext.size())) != 1) {
    return std::nullopt;
  }
  Tag128 tag_copy = tag;  // EVP wants a mutable pointer
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG,
                          static_cast<int>(tag_copy.size()),
                          tag_copy.data()) != 1) {
    fail("gcm set tag failed");
  }
  int fin = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), plaintext.data() + len, &fin) != 1) {
    return std::nullopt;  // authentication failure
  }
  return plaintext;
}

bool ct_equal(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

void secure_wipe(std::span<std::uint8_t> data) {
  if (!data.empty()) OPENSSL_cleanse(data.data(), data.size());
}

}  // namespace burngate::crypto
