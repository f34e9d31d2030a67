#pragma once

#include <cstddef>

#include "archivesafe/bytes.hpp"
#include "archivesafe/random.hpp"

namespace archivesafe {

inline constexpr std::size_t kBlockBytes = 16;
inline constexpr std::size_t kMaxPlaintextBytes = std::size_t{1} << 30;

/// AES-128-CBC output. body.size() is a positive multiple of 16.
struct SymCiphertext {
  Iv iv;
  Bytes body;
  friend bool operator==(const SymCiphertext&, const SymCiphertext&) = default;
};

/// Body length for a plaintext of n bytes: 16 * (n / 16 + 1).
constexpr std::size_t padded_length(std::size_t n) noexcept {
  return (n / kBlockBytes + 1) * kBlockBytes;
}

/// AES-128-CBC with PKCS#7 padding under a fresh IV drawn from rng.
SymCiphertext sym_encrypt(const SymmetricKey& key, ByteView plaintext, RandomSource& rng);

SymCiphertext sym_encrypt_with_iv(const SymmetricKey& key, const Iv& iv, ByteView plaintext);

/// Throws Error(PaddingInvalid) when the body is not a positive multiple of
/// 16 bytes or the recovered padding is malformed.
Bytes sym_decrypt(const SymmetricKey& key, const SymCiphertext& ct);

}  // namespace archivesafe
