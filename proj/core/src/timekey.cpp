#include "burngate/timekey.hpp"

namespace burngate::timekey {

namespace {
constexpr std::string_view kTimeKeyLabel = "timekey-v1";

void put_be64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
}

std::uint64_t get_be64(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | in[i];
  return v;
}
}  // namespace

TemporalWindow TemporalWindow::make(std::uint64_t start, std::uint64_t duration) {
  if (duration == 0) throw DomainError("window duration must be > 0");
  if (start > ~std::uint64_t{0} - duration) {
    throw DomainError("window end overflows");
  }
  return TemporalWindow{start, duration};
}

std::array<std::uint8_t, 16> TemporalWindow::canonical() const {
  std::array<std::uint8_t, 16> out{};
  put_be64(out.data(), start);
  put_be64(out.data() + 8, duration);
  return out;
}

std::optional<TemporalWindow> TemporalWindow::from_canonical(ByteView bytes) {
  if (bytes.size() != 16) return std::nullopt;
  std::uint64_t start = get_be64(bytes.data());
  std::uint64_t duration = get_be64(bytes.data() + 8);
  if (duration == 0 || start > ~std::uint64_t{0} - duration) return std::nullopt;
  return TemporalWindow{start, duration};
}

ContextId ContextId::random(Rng& rng) {
  ContextId cid;
  rng.fill(cid.id);
  return cid;
}

std::optional<ContextId> ContextId::from_hex(std::string_view hex) {
  auto bytes = burngate::from_hex(hex);
  if (!bytes || bytes->size() != 16) return std::nullopt;
  ContextId cid;
  std::copy(bytes->begin(), bytes->end(), cid.id.begin());
  return cid;
}

std::string ContextId::hex() const { return to_hex(id); }

TimeKey derive_time_key(ByteView seed, const TemporalWindow& window,
                        const ContextId& context) {
  if (window.duration == 0) throw DomainError("window duration must be > 0");
  Bytes info;
  info.reserve(kTimeKeyLabel.size() + 32);
  info.insert(info.end(), kTimeKeyLabel.begin(), kTimeKeyLabel.end());
  auto canon = window.canonical();
  info.insert(info.end(), canon.begin(), canon.end());
  info.insert(info.end(), context.id.begin(), context.id.end());

  TimeKey key;
  key.key = crypto::hkdf_sha256(seed, info);
  key.window = window;
  key.context = context;
  return key;
}

SeedHolder::SeedHolder(const crypto::Key256& seed) : seed_(seed) {}

SeedHolder::~SeedHolder() { crypto::secure_wipe(seed_); }

std::optional<TimeKey> SeedHolder::derive(const TemporalWindow& window,
                                          const ContextId& context) const {
  std::lock_guard lock(mu_);
  if (!live_) return std::nullopt;
  return derive_time_key(seed_, window, context);
}

std::optional<crypto::Key256> SeedHolder::seed() const {
  std::lock_guard lock(mu_);
  if (!live_) return std::nullopt;
  return seed_;
}

DestructionReceipt SeedHolder::destroy(std::uint64_t now) {
  std::lock_guard lock(mu_);
  if (!live_) return DestructionReceipt{destroyed_at_, true};
  crypto::secure_wipe(seed_);
  live_ = false;
  destroyed_at_ = now;
  return DestructionReceipt{now, false};
}

bool SeedHolder::destroyed() const {
  std::lock_guard lock(mu_);
  return !live_;
}

}  // namespace burngate::timekey
