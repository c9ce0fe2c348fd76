#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace burngate {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Thrown when an operation's precondition is violated (bad argument shapes,
// zero denominators, malformed windows). Expected runtime outcomes are
// returned as status enums instead.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

std::string base64_encode(ByteView data);
std::optional<Bytes> base64_decode(std::string_view text);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
inline std::string to_string(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

}  // namespace burngate
