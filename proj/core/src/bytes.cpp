#include "archivesafe/bytes.hpp"

#include <algorithm>

#include "archivesafe/error.hpp"
#include "archivesafe/random.hpp"
#include "blake2b.hpp"

namespace archivesafe {

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

bool contains(ByteView haystack, ByteView needle) {
  if (needle.empty()) return true;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

void secure_wipe(std::span<std::uint8_t> data) noexcept {
  sodium_memzero(data.data(), data.size());
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DifficultyOutOfRange: return "DifficultyOutOfRange";
    case ErrorCode::CannotReduceDifficulty: return "CannotReduceDifficulty";
    case ErrorCode::ExhaustedNoSolution: return "ExhaustedNoSolution";
    case ErrorCode::SaltRequired: return "SaltRequired";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::SolveTimeout: return "SolveTimeout";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::PaddingInvalid: return "PaddingInvalid";
    case ErrorCode::MessageTooLarge: return "MessageTooLarge";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedInput: return "TruncatedInput";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::MalformedLengths: return "MalformedLengths";
    case ErrorCode::MalformedFlags: return "MalformedFlags";
    case ErrorCode::MalformedRequest: return "MalformedRequest";
    case ErrorCode::DifficultyTooHigh: return "DifficultyTooHigh";
    case ErrorCode::ServerReturnedInvalidSeed: return "ServerReturnedInvalidSeed";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace detail {

void ensure_sodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error(ErrorCode::InvalidArgument, "libsodium failed to initialize");
}

}  // namespace detail

SystemRandom::SystemRandom() { detail::ensure_sodium(); }

void SystemRandom::fill(std::span<std::uint8_t> out) {
  randombytes_buf(out.data(), out.size());
}

void DeterministicRandom::refill() {
  detail::ensure_sodium();
  const auto s = detail::le64(seed_);
  const auto c = detail::le64(counter_++);
  detail::blake2b(block_, {ByteView(s), ByteView(c)});
  used_ = 0;
}

void DeterministicRandom::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

}  // namespace archivesafe
