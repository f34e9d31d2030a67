#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

#include <sodium.h>

#include "archivesafe/bytes.hpp"

namespace archivesafe::detail {

void ensure_sodium();

/// Unkeyed BLAKE2b with digest length out.size() (1..64) over the
/// concatenation of parts.
inline void blake2b(std::span<std::uint8_t> out,
                    std::initializer_list<ByteView> parts) {
  crypto_generichash_blake2b_state st;
  crypto_generichash_blake2b_init(&st, nullptr, 0, out.size());
  for (const auto& p : parts) {
    crypto_generichash_blake2b_update(&st, p.data(), p.size());
  }
  crypto_generichash_blake2b_final(&st, out.data(), out.size());
}

inline std::array<std::uint8_t, 4> le32(std::uint32_t v) {
  return {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
          static_cast<std::uint8_t>(v >> 16),
          static_cast<std::uint8_t>(v >> 24)};
}

inline std::array<std::uint8_t, 8> le64(std::uint64_t v) {
  std::array<std::uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

}  // namespace archivesafe::detail
