#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "archivesafe/dbke.hpp"

namespace archivesafe {

// On-disk layout, all integers big-endian:
//
//   magic "ASAF" (4) | version (1) | suite (1) | flags (1) | lambda (2)
//   | partial_bits (2) | checksum h (16) | salt (16, iff salted)
//   | partial seed (ceil(partial_bits / 8)) | iv (16) | body_len (8)
//   | body checksum (16, iff flagged) | body (body_len)

inline constexpr std::array<std::uint8_t, 4> kContainerMagic = {'A', 'S', 'A', 'F'};
inline constexpr std::uint8_t kContainerVersion = 1;

namespace container_flags {
inline constexpr std::uint8_t kSalted = 0x01;
inline constexpr std::uint8_t kLayered = 0x02;
inline constexpr std::uint8_t kBodyChecksum = 0x04;
inline constexpr std::uint8_t kKnown = kSalted | kLayered | kBodyChecksum;
}  // namespace container_flags

struct ContainerHeader {
  std::uint8_t version = kContainerVersion;
  KdfSuiteId suite = KdfSuiteId::Blake2b;
  std::uint8_t flags = 0;
  std::uint16_t lambda_bits = static_cast<std::uint16_t>(kLambdaBits);
  Digest checksum;
  std::optional<Salt> salt;
  PartialSeed partial;
  Iv iv;
  std::uint64_t body_len = 0;
  std::optional<Digest> body_checksum;
  /// Encoded size of everything before the body.
  std::size_t size = 0;

  unsigned difficulty() const noexcept { return partial.difficulty(); }
  bool salted() const noexcept { return flags & container_flags::kSalted; }
  bool layered() const noexcept { return flags & container_flags::kLayered; }
};

struct SerializeOptions {
  bool body_checksum = true;
};

struct ParseOptions {
  bool verify_body_checksum = true;
};

struct ParsedContainer {
  DbkeCiphertext ciphertext;
  ContainerHeader header;
};

/// Header bytes for the given shape (excluding the body).
std::size_t header_size(unsigned difficulty, bool salted, bool body_checksum) noexcept;

/// Total encoded size for a plaintext of plaintext_len bytes.
std::size_t container_size(unsigned difficulty, bool salted, bool body_checksum,
                           std::size_t plaintext_len) noexcept;

/// Canonical encoding. A salted ciphertext must carry its salt.
Bytes serialize(const DbkeCiphertext& ct, const SerializeOptions& options = {});

/// Reads and validates the header from the front of `bytes`.
/// When total_size is given, body_len is checked against it (the body itself
/// is never read). Throws Error with BadMagic, UnsupportedVersion,
/// UnknownSuite, MalformedFlags, MalformedLengths or TruncatedInput.
ContainerHeader parse_header(ByteView bytes, std::optional<std::uint64_t> total_size = {});

/// Full parse: header, body length, and the body checksum when present.
ParsedContainer parse(ByteView bytes, const ParseOptions& options = {});

/// Raises the puzzle difficulty of an encoded container. Only partial_bits
/// and the partial seed change; every body byte is copied unchanged.
/// Throws CannotReduceDifficulty when target is below the current level.
Bytes degrade_file(ByteView bytes, unsigned target_difficulty, bool allow_high_difficulty = false);

struct ContainerInfo {
  ContainerHeader header;
  double expected_candidates = 0;
  std::chrono::duration<double> estimated_solve{0};
};

/// Per-call KDF cost assumed by inspect when none is measured.
std::chrono::duration<double> nominal_kdf_time(KdfSuiteId suite) noexcept;

/// Reads only the header from `in`; total_size is the full container size.
ContainerInfo inspect(std::istream& in, std::uint64_t total_size,
                      std::optional<std::chrono::duration<double>> kdf_time = {});

ContainerInfo inspect(ByteView bytes, std::optional<std::chrono::duration<double>> kdf_time = {});

std::string format_info(const ContainerInfo& info);

}  // namespace archivesafe
