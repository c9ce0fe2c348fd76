#include "burngate/clock.hpp"

#include <chrono>

namespace burngate {

std::uint64_t RealClock::now() const {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
}

}  // namespace burngate
