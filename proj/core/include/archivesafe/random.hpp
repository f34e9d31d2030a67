#pragma once

#include <cstdint>
#include <span>

#include "archivesafe/bytes.hpp"

namespace archivesafe {

/// Source of the randomness consumed by wrapping and encryption.
/// Draw order is part of the contract: seed, then salt (if salted), then IV.
/// Two encryptions fed identical streams therefore share every random value.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  template <typename Tag>
  Block128<Tag> draw() {
    Block128<Tag> b;
    fill(b.bytes);
    return b;
  }
};

/// Operating-system CSPRNG (libsodium randombytes).
class SystemRandom final : public RandomSource {
 public:
  SystemRandom();
  void fill(std::span<std::uint8_t> out) override;
};

/// Reproducible stream for tests and benchmarks. Block i of the stream is
/// BLAKE2b-512(LE64(seed) || LE64(i)); bytes are consumed in order.
/// Never use for real archives.
class DeterministicRandom final : public RandomSource {
 public:
  explicit DeterministicRandom(std::uint64_t seed) : seed_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 64> block_{};
  std::size_t used_ = 64;
};

}  // namespace archivesafe
