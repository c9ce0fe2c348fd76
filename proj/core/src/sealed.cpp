#include "burngate/sealed.hpp"

#include <algorithm>
#include <cstring>

namespace burngate::timekey {

namespace {
constexpr std::size_t kHeaderSize = 4 + 16 + 16 + 12;

Bytes header_bytes(const TemporalWindow& window, const ContextId& context,
                   const crypto::Nonce96& nonce) {
  Bytes header;
  header.reserve(kHeaderSize);
  header.insert(header.end(), kSealedMagic, kSealedMagic + 4);
  auto canon = window.canonical();
  header.insert(header.end(), canon.begin(), canon.end());
  header.insert(header.end(), context.id.begin(), context.id.end());
  header.insert(header.end(), nonce.begin(), nonce.end());
  return header;
}
}  // namespace

Bytes SealedDocument::encode() const {
  Bytes out = header_bytes(window, context, nonce);
  out.insert(out.end(), ciphertext.begin(), ciphertext.end());
  out.insert(out.end(), tag.begin(), tag.end());
  return out;
}

std::optional<SealedDocument> SealedDocument::decode(ByteView bytes) {
  if (bytes.size() < kHeaderSize + 16) return std::nullopt;
  if (std::memcmp(bytes.data(), kSealedMagic, 4) != 0) return std::nullopt;

  SealedDocument doc;
  auto window = TemporalWindow::from_canonical(bytes.subspan(4, 16));
  if (!window) return std::nullopt;
  doc.window = *window;
  std::copy_n(bytes.data() + 20, 16, doc.context.id.begin());
  std::copy_n(bytes.data() + 36, 12, doc.nonce.begin());
  std::size_t body = bytes.size() - kHeaderSize - 16;
  doc.ciphertext.assign(bytes.begin() + kHeaderSize,
                        bytes.begin() + kHeaderSize + body);
  std::copy_n(bytes.data() + kHeaderSize + body, 16, doc.tag.begin());
  return doc;
}

SealedDocument seal(ByteView plaintext, ByteView seed,
                    const TemporalWindow& window, const ContextId& context,
                    Rng& nonce_source) {
  if (plaintext.empty()) throw DomainError("seal: plaintext must be non-empty");
  SealedDocument doc;
  doc.window = window;
  doc.context = context;
  nonce_source.fill(doc.nonce);

  TimeKey key = derive_time_key(seed, window, context);
  Bytes aad = header_bytes(window, context, doc.nonce);
  crypto::Sealed sealed = crypto::aead_seal(key.key, doc.nonce, aad, plaintext);
  doc.ciphertext = std::move(sealed.ciphertext);
  doc.tag = sealed.tag;
  return doc;
}

UnsealOutcome unseal(const SealedDocument& doc, ByteView seed,
                     std::uint64_t now) {
  UnsealOutcome out;
  if (now >= doc.window.end()) {
    out.status = UnsealOutcome::Status::expired;
    return out;
  }
  if (now < doc.window.start) {
    out.status = UnsealOutcome::Status::not_yet_valid;
    return out;
  }
  TimeKey key = derive_time_key(seed, doc.window, doc.context);
  Bytes aad = header_bytes(doc.window, doc.context, doc.nonce);
  auto plaintext =
      crypto::aead_open(key.key, doc.nonce, aad, doc.ciphertext, doc.tag);
  if (!plaintext) {
    out.status = UnsealOutcome::Status::integrity_failure;
    return out;
  }
  out.status = UnsealOutcome::Status::ok;
  out.plaintext = std::move(*plaintext);
  return out;
}

UnsealOutcome unseal(const SealedDocument& doc, const SeedHolder& holder,
                     std::uint64_t now) {
  UnsealOutcome out;
  if (now >= doc.window.end()) {
    out.status = UnsealOutcome::Status::expired;
    return out;
  }
  auto seed = holder.seed();
  if (!seed) {
    out.status = UnsealOutcome::Status::seed_destroyed;
    return out;
  }
  return unseal(doc, *seed, now);
}

}  // namespace burngate::timekey
