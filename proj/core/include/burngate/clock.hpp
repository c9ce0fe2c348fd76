#pragma once

#include <atomic>
#include <cstdint>

namespace burngate {

/// Injected time source. Every `now` parameter in the library flows from one
/// of these so expiry and timer behavior is reproducible under test.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::uint64_t now() const = 0;  // epoch seconds
};

class RealClock final : public Clock {
 public:
  std::uint64_t now() const override;
};

/// Manual clock: time moves only when advance()/set() is called.
class SimClock final : public Clock {
 public:
  explicit SimClock(std::uint64_t start = 0) : now_(start) {}
  std::uint64_t now() const override { return now_.load(); }
  void advance(std::uint64_t seconds) { now_ += seconds; }
  void set(std::uint64_t t) { now_.store(t); }

 private:
  std::atomic<std::uint64_t> now_;
};

}  // namespace burngate
