#pragma once

#include <cstdint>
#include <string_view>

namespace ccnsim {

/// Incremental FNV-1a (64-bit). Used for state digests, trace hashes and
/// scenario identifiers; not cryptographic.
class Fnv1a64 {
public:
  Fnv1a64& mixByte(std::uint8_t b) {
    m_state ^= b;
    m_state *= 1099511628211ULL;
    return *this;
  }

  Fnv1a64& mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      mixByte(static_cast<std::uint8_t>(v & 0xff));
      v >>= 8;
    }
    return *this;
  }

  Fnv1a64& mix(std::string_view s) {
    for (char c : s) {
      mixByte(static_cast<std::uint8_t>(c));
    }
    mixByte(0); // terminator keeps adjacent fields from blending
    return *this;
  }

  std::uint64_t digest() const { return m_state; }

private:
  std::uint64_t m_state = 14695981039346656037ULL;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  return Fnv1a64{}.mix(s).digest();
}

} // namespace ccnsim
