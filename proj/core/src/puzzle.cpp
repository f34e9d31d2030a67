#include "archivesafe/puzzle.hpp"

#include <string>

#include "archivesafe/error.hpp"

namespace archivesafe {
namespace {

static_assert(kLambdaBits == 128, "seed arithmetic below assumes a 128-bit lambda");
using u128 = unsigned __int128;

u128 load(const std::array<std::uint8_t, kLambdaBytes>& b) {
  u128 v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

std::array<std::uint8_t, kLambdaBytes> store(u128 v) {
  std::array<std::uint8_t, kLambdaBytes> b{};
  for (int i = static_cast<int>(kLambdaBytes) - 1; i >= 0; --i) {
    b[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
  return b;
}

u128 low_mask(unsigned bits) {
  return bits >= 128 ? ~u128{0} : ((u128{1} << bits) - 1);
}

// Packs the low `bits` bits of value left-aligned into ceil(bits/8) bytes.
Bytes pack(u128 value, unsigned bits) {
  const u128 aligned = bits == 0 ? 0 : value << (128 - bits);
  const auto full = store(aligned);
  return Bytes(full.begin(), full.begin() + (bits + 7) / 8);
}

}  // namespace

void check_difficulty(unsigned d, bool allow_above_default) {
  if (d > kLambdaBits) {
    throw Error(ErrorCode::DifficultyOutOfRange,
                "difficulty " + std::to_string(d) + " exceeds lambda");
  }
  if (d > kDefaultMaxDifficulty && !allow_above_default) {
    throw Error(ErrorCode::DifficultyOutOfRange,
                "difficulty " + std::to_string(d) + " exceeds the default maximum of " +
                    std::to_string(kDefaultMaxDifficulty) + " (override required)");
  }
}

PartialSeed PartialSeed::from_seed(const Seed& seed, unsigned difficulty) {
  check_difficulty(difficulty, true);
  const unsigned bits = static_cast<unsigned>(kLambdaBits) - difficulty;
  PartialSeed out;
  out.bit_length_ = static_cast<std::uint16_t>(bits);
  out.packed_ = pack(load(seed.bytes) & low_mask(bits), bits);
  return out;
}

std::optional<PartialSeed> PartialSeed::from_packed(unsigned bit_length, ByteView packed) {
  if (bit_length > kLambdaBits || packed.size() != (bit_length + 7) / 8) return std::nullopt;
  if (bit_length % 8 != 0) {
    const std::uint8_t pad_mask = static_cast<std::uint8_t>((1u << (8 - bit_length % 8)) - 1);
    if ((packed.back() & pad_mask) != 0) return std::nullopt;
  }
  PartialSeed out;
  out.bit_length_ = static_cast<std::uint16_t>(bit_length);
  out.packed_.assign(packed.begin(), packed.end());
  return out;
}

Seed PartialSeed::known_suffix() const {
  std::array<std::uint8_t, kLambdaBytes> full{};
  std::copy(packed_.begin(), packed_.end(), full.begin());
  const u128 aligned = load(full);
  const u128 value = bit_length_ == 0 ? 0 : aligned >> (128 - bit_length_);
  return Seed{store(value)};
}

PartialSeed PartialSeed::drop_leading(unsigned bits) const {
  if (bits > bit_length_) {
    throw Error(ErrorCode::DifficultyOutOfRange, "cannot remove more bits than remain");
  }
  const unsigned remaining = bit_length_ - bits;
  PartialSeed out;
  out.bit_length_ = static_cast<std::uint16_t>(remaining);
  out.packed_ = pack(load(known_suffix().bytes) & low_mask(remaining), remaining);
  return out;
}

Seed PartialSeed::candidate(std::uint64_t prefix) const {
  const unsigned d = difficulty();
  const u128 suffix = load(known_suffix().bytes);
  const u128 top = d == 0 ? 0 : u128{prefix} << (128 - d);
  return Seed{store(top | suffix)};
}

}  // namespace archivesafe
