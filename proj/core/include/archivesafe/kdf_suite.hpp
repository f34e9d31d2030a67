#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "archivesafe/bytes.hpp"

namespace archivesafe {

/// Identifier of a (H1, H2) instantiation. Stored as one byte in containers.
enum class KdfSuiteId : std::uint8_t {
  Argon2id = 1,  ///< production, memory-hard
  Blake2b = 2,   ///< fast, for tests and benchmarks
};

struct KdfParams {
  std::uint32_t parallelism;  // lanes
  std::uint32_t memory_kib;
  std::uint32_t iterations;
  std::uint32_t output_bits;

  friend bool operator==(const KdfParams&, const KdfParams&) = default;
};

/// Domain-separator bytes prepended to every KDF input.
enum class KdfDomain : std::uint8_t {
  Checksum = 0x01,      // H1
  Key = 0x02,           // H2
  BodyChecksum = 0x03,  // container integrity field
  Passphrase = 0x04,    // layered-mode user key
};

/// Returns nullopt for ids outside the table.
std::optional<KdfSuiteId> suite_from_byte(std::uint8_t id) noexcept;

/// Throws Error(UnknownSuite) for ids outside the table.
KdfSuiteId parse_suite(std::uint8_t id);

std::string_view suite_name(KdfSuiteId suite) noexcept;

/// Fixed parameter table. For the Blake2b suite the memory-hardness fields
/// are zero and only output_bits is meaningful.
const KdfParams& suite_params(KdfSuiteId suite);

/// Public constant passed as the Argon2 salt. Argon2 requires a salt of at
/// least 8 bytes; the constant keeps H1/H2 pure functions of (prefix || input).
inline constexpr std::string_view kArgon2Salt = "archivesafe.kdf1";

/// Suite(prefix || input), sized to the suite's output length.
Digest kdf_hash(KdfSuiteId suite, KdfDomain domain, ByteView input);

/// H1: checksum of a seed candidate.
Digest h1(KdfSuiteId suite, ByteView input);

/// H2: key derivation.
SymmetricKey h2(KdfSuiteId suite, ByteView input);

/// Number of KDF evaluations performed so far on the calling thread.
/// Tests diff this around a call to count its hash invocations.
std::uint64_t kdf_calls_on_this_thread() noexcept;

}  // namespace archivesafe
