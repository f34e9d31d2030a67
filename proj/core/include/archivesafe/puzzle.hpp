#pragma once

#include <cstdint>
#include <optional>

#include "archivesafe/bytes.hpp"
#include "archivesafe/kdf_suite.hpp"

namespace archivesafe {

/// Difficulty above this needs an explicit override.
inline constexpr unsigned kDefaultMaxDifficulty = 64;

/// Throws Error(DifficultyOutOfRange) when d > lambda, or when
/// d > kDefaultMaxDifficulty without allow_above_default.
void check_difficulty(unsigned d, bool allow_above_default = false);

/// The seed with its first d bits removed.
///
/// Bits are numbered most-significant-first over the big-endian seed bytes.
/// The remaining (lambda - d) bits are stored left-aligned in
/// ceil((lambda - d) / 8) bytes with zero padding in the low bits of the last
/// byte; that packed form is the canonical encoding.
class PartialSeed {
 public:
  PartialSeed() = default;

  static PartialSeed from_seed(const Seed& seed, unsigned difficulty);

  /// Validates the byte count and that padding bits are zero.
  static std::optional<PartialSeed> from_packed(unsigned bit_length, ByteView packed);

  unsigned bit_length() const noexcept { return bit_length_; }
  unsigned difficulty() const noexcept { return static_cast<unsigned>(kLambdaBits) - bit_length_; }
  const Bytes& packed() const noexcept { return packed_; }

  /// Removes the next `bits` leading bits.
  PartialSeed drop_leading(unsigned bits) const;

  /// The seed with all removed bits set to zero, i.e. the known suffix as a
  /// right-aligned 128-bit big-endian value.
  Seed known_suffix() const;

  /// Candidate seed for the given value of the missing bits.
  /// Requires difficulty() <= 64 and prefix < 2^difficulty().
  Seed candidate(std::uint64_t prefix) const;

  friend bool operator==(const PartialSeed&, const PartialSeed&) = default;

 private:
  std::uint16_t bit_length_ = static_cast<std::uint16_t>(kLambdaBits);
  Bytes packed_ = Bytes(kLambdaBytes);
};

/// What an outsourced solver is allowed to see: checksum and partial seed.
struct PublicPuzzle {
  KdfSuiteId suite = KdfSuiteId::Blake2b;
  Digest checksum;
  PartialSeed partial;

  unsigned difficulty() const noexcept { return partial.difficulty(); }
  friend bool operator==(const PublicPuzzle&, const PublicPuzzle&) = default;
};

}  // namespace archivesafe
