#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace archivesafe {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Security parameter in bits. Seeds, checksums, salts and keys all share it.
inline constexpr std::size_t kLambdaBits = 128;
inline constexpr std::size_t kLambdaBytes = kLambdaBits / 8;

/// Fixed-size byte string used for every lambda-sized value.
/// The Tag parameter keeps seeds, keys, salts and checksums from being
/// passed for one another.
template <typename Tag>
struct Block128 {
  std::array<std::uint8_t, kLambdaBytes> bytes{};

  ByteView view() const noexcept { return {bytes.data(), bytes.size()}; }
  friend bool operator==(const Block128&, const Block128&) = default;
};

struct SeedTag {};
struct SaltTag {};
struct KeyTag {};
struct DigestTag {};
struct IvTag {};

using Seed = Block128<SeedTag>;
using Salt = Block128<SaltTag>;
using SymmetricKey = Block128<KeyTag>;
using Digest = Block128<DigestTag>;
using Iv = Block128<IvTag>;

std::string to_hex(ByteView data);

/// Lowercase hex only; returns nullopt on odd length or any other character.
std::optional<Bytes> from_hex(std::string_view hex);

template <typename Tag>
std::string to_hex(const Block128<Tag>& b) {
  return to_hex(b.view());
}

/// Copies exactly kLambdaBytes from data; returns nullopt on a size mismatch.
template <typename Tag>
std::optional<Block128<Tag>> block_from_bytes(ByteView data) {
  if (data.size() != kLambdaBytes) return std::nullopt;
  Block128<Tag> out;
  for (std::size_t i = 0; i < kLambdaBytes; ++i) out.bytes[i] = data[i];
  return out;
}

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void secure_wipe(std::span<std::uint8_t> data) noexcept;

template <typename Tag>
void secure_wipe(Block128<Tag>& b) noexcept {
  secure_wipe(std::span<std::uint8_t>(b.bytes));
}

/// True when needle occurs anywhere inside haystack.
bool contains(ByteView haystack, ByteView needle);

}  // namespace archivesafe
