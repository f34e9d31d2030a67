#include "archivesafe/argon2.hpp"

#include <algorithm>
#include <cstring>
#include <memory>

#include "archivesafe/error.hpp"
#include "blake2b.hpp"

namespace archivesafe {
namespace {

constexpr std::uint32_t kVersion = 0x13;
constexpr std::uint32_t kTypeId = 2;
constexpr std::uint32_t kSyncPoints = 4;
constexpr std::size_t kBlockWords = 128;  // 1 KiB
constexpr std::size_t kAddressesPerBlock = kBlockWords;

struct alignas(64) Block {
  std::uint64_t v[kBlockWords];
};

void xor_into(Block& dst, const Block& src) {
  for (std::size_t i = 0; i < kBlockWords; ++i) dst.v[i] ^= src.v[i];
}

inline std::uint64_t rotr(std::uint64_t x, unsigned n) {
  return (x >> n) | (x << (64 - n));
}

inline std::uint64_t blamka(std::uint64_t x, std::uint64_t y) {
  const std::uint64_t m = 0xFFFFFFFFull;
  return x + y + 2 * ((x & m) * (y & m));
}

inline void mix(std::uint64_t& a, std::uint64_t& b, std::uint64_t& c,
                std::uint64_t& d) {
  a = blamka(a, b);
  d = rotr(d ^ a, 32);
  c = blamka(c, d);
  b = rotr(b ^ c, 24);
  a = blamka(a, b);
  d = rotr(d ^ a, 16);
  c = blamka(c, d);
  b = rotr(b ^ c, 63);
}

// The BLAKE2b round without message words, applied to 16 words picked by idx.
inline void permute(std::uint64_t* v, const std::size_t (&idx)[16]) {
  auto at = [&](int i) -> std::uint64_t& { return v[idx[i]]; };
  mix(at(0), at(4), at(8), at(12));
  mix(at(1), at(5), at(9), at(13));
  mix(at(2), at(6), at(10), at(14));
  mix(at(3), at(7), at(11), at(15));
  mix(at(0), at(5), at(10), at(15));
  mix(at(1), at(6), at(11), at(12));
  mix(at(2), at(7), at(8), at(13));
  mix(at(3), at(4), at(9), at(14));
}

// Compression G. With accumulate set (passes after the first, v1.3) the
// previous content of out is folded into the result.
void compress(const Block& prev, const Block& ref, Block& out,
              bool accumulate) {
  Block r;
  for (std::size_t i = 0; i < kBlockWords; ++i) r.v[i] = prev.v[i] ^ ref.v[i];
  Block tmp = r;
  if (accumulate) xor_into(tmp, out);

  for (std::size_t row = 0; row < 8; ++row) {
    std::size_t idx[16];
    for (std::size_t j = 0; j < 16; ++j) idx[j] = 16 * row + j;
    permute(r.v, idx);
  }
  for (std::size_t col = 0; col < 8; ++col) {
    std::size_t idx[16];
    for (std::size_t j = 0; j < 8; ++j) {
      idx[2 * j] = 2 * col + 16 * j;
      idx[2 * j + 1] = 2 * col + 16 * j + 1;
    }
    permute(r.v, idx);
  }

  for (std::size_t i = 0; i < kBlockWords; ++i) out.v[i] = tmp.v[i] ^ r.v[i];
}

// Variable-length hash H' built on BLAKE2b.
void long_hash(std::span<std::uint8_t> out, ByteView input) {
  const auto len = detail::le32(static_cast<std::uint32_t>(out.size()));
  if (out.size() <= 64) {
    detail::blake2b(out, {ByteView(len), input});
    return;
  }
  const std::size_t r = (out.size() + 31) / 32 - 2;
  std::uint8_t v[64];
  detail::blake2b(v, {ByteView(len), input});
  std::memcpy(out.data(), v, 32);
  std::size_t pos = 32;
  for (std::size_t i = 1; i < r; ++i) {
    std::uint8_t next[64];
    detail::blake2b(next, {ByteView(v, 64)});
    std::memcpy(v, next, 64);
    std::memcpy(out.data() + pos, v, 32);
    pos += 32;
  }
  detail::blake2b(out.subspan(pos), {ByteView(v, 64)});
}

void load_block(Block& b, const std::uint8_t* bytes) {
  for (std::size_t i = 0; i < kBlockWords; ++i) {
    std::uint64_t w = 0;
    for (int k = 7; k >= 0; --k) w = (w << 8) | bytes[8 * i + k];
    b.v[i] = w;
  }
}

void store_block(const Block& b, std::uint8_t* bytes) {
  for (std::size_t i = 0; i < kBlockWords; ++i) {
    for (int k = 0; k < 8; ++k) bytes[8 * i + k] = static_cast<std::uint8_t>(b.v[i] >> (8 * k));
  }
}

class Instance {
 public:
  Instance(const Argon2Params& p)
      : lanes_(p.lanes),
        passes_(p.iterations),
        segment_length_(p.memory_kib / (kSyncPoints * p.lanes)),
        lane_length_(segment_length_ * kSyncPoints),
        total_blocks_(lane_length_ * lanes_),
        memory_(std::make_unique_for_overwrite<Block[]>(total_blocks_)) {}

  void initialize(const std::uint8_t (&h0)[64]) {
    std::uint8_t seed[72];
    std::memcpy(seed, h0, 64);
    std::uint8_t bytes[1024];
    for (std::uint32_t lane = 0; lane < lanes_; ++lane) {
      const auto l = detail::le32(lane);
      std::memcpy(seed + 68, l.data(), 4);
      for (std::uint32_t col = 0; col < 2; ++col) {
        const auto c = detail::le32(col);
        std::memcpy(seed + 64, c.data(), 4);
        long_hash(bytes, ByteView(seed, 72));
        load_block(at(lane, col), bytes);
      }
    }
  }

  void fill() {
    for (std::uint32_t pass = 0; pass < passes_; ++pass) {
      for (std::uint32_t slice = 0; slice < kSyncPoints; ++slice) {
        for (std::uint32_t lane = 0; lane < lanes_; ++lane) {
          fill_segment(pass, lane, slice);
        }
      }
    }
  }

  void finalize(std::span<std::uint8_t> tag) {
    Block acc = at(0, lane_length_ - 1);
    for (std::uint32_t lane = 1; lane < lanes_; ++lane) {
      xor_into(acc, at(lane, lane_length_ - 1));
    }
    std::uint8_t bytes[1024];
    store_block(acc, bytes);
    long_hash(tag, ByteView(bytes, sizeof bytes));
  }

 private:
  Block& at(std::uint32_t lane, std::uint32_t col) {
    return memory_[static_cast<std::size_t>(lane) * lane_length_ + col];
  }

  std::uint32_t reference_index(std::uint32_t pass, std::uint32_t slice,
                                std::uint32_t index, std::uint32_t pseudo_rand,
                                bool same_lane) const {
    std::uint32_t area;
    if (pass == 0) {
      if (slice == 0) {
        area = index - 1;
      } else if (same_lane) {
        area = slice * segment_length_ + index - 1;
      } else {
        area = slice * segment_length_ - (index == 0 ? 1 : 0);
      }
    } else {
      if (same_lane) {
        area = lane_length_ - segment_length_ + index - 1;
      } else {
        area = lane_length_ - segment_length_ - (index == 0 ? 1 : 0);
      }
    }
    std::uint64_t rel = pseudo_rand;
    rel = (rel * rel) >> 32;
    rel = area - 1 - ((static_cast<std::uint64_t>(area) * rel) >> 32);
    std::uint32_t start = 0;
    if (pass != 0 && slice != kSyncPoints - 1) start = (slice + 1) * segment_length_;
    return static_cast<std::uint32_t>((start + rel) % lane_length_);
  }

  void fill_segment(std::uint32_t pass, std::uint32_t lane, std::uint32_t slice) {
    const bool independent = pass == 0 && slice < kSyncPoints / 2;

    Block input{}, address{}, zero{};
    auto next_addresses = [&] {
      ++input.v[6];
      compress(zero, input, address, false);
      compress(zero, address, address, false);
    };
    if (independent) {
      input.v[0] = pass;
      input.v[1] = lane;
      input.v[2] = slice;
      input.v[3] = total_blocks_;
      input.v[4] = passes_;
      input.v[5] = kTypeId;
    }

    std::uint32_t start = 0;
    if (pass == 0 && slice == 0) {
      start = 2;
      if (independent) next_addresses();
    }

    std::size_t curr = static_cast<std::size_t>(lane) * lane_length_ +
                       slice * segment_length_ + start;
    std::size_t prev = curr % lane_length_ == 0 ? curr + lane_length_ - 1 : curr - 1;

    for (std::uint32_t i = start; i < segment_length_; ++i, ++curr, ++prev) {
      if (curr % lane_length_ == 1) prev = curr - 1;

      std::uint64_t pseudo_rand;
      if (independent) {
        if (i % kAddressesPerBlock == 0) next_addresses();
        pseudo_rand = address.v[i % kAddressesPerBlock];
      } else {
        pseudo_rand = memory_[prev].v[0];
      }

      std::uint32_t ref_lane = static_cast<std::uint32_t>((pseudo_rand >> 32) % lanes_);
      if (pass == 0 && slice == 0) ref_lane = lane;
      const std::uint32_t ref_col =
          reference_index(pass, slice, i, static_cast<std::uint32_t>(pseudo_rand),
                          ref_lane == lane);

      compress(memory_[prev], at(ref_lane, ref_col), memory_[curr], pass != 0);
    }
  }

  std::uint32_t lanes_;
  std::uint32_t passes_;
  std::uint32_t segment_length_;
  std::uint32_t lane_length_;
  std::uint32_t total_blocks_;
  std::unique_ptr<Block[]> memory_;
};

void validate(const Argon2Params& p, ByteView salt) {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (p.lanes < 1 || p.lanes >= (1u << 24)) fail("argon2: lanes out of range");
  if (p.memory_kib < 8 * p.lanes) fail("argon2: memory must be at least 8 KiB per lane");
  if (p.iterations < 1) fail("argon2: at least one pass required");
  if (p.tag_bytes < 4) fail("argon2: tag must be at least 4 bytes");
  if (salt.size() < 8) fail("argon2: salt must be at least 8 bytes");
}

}  // namespace

Bytes argon2id(const Argon2Params& params, ByteView password, ByteView salt,
               ByteView secret, ByteView associated_data) {
  validate(params, salt);
  detail::ensure_sodium();

  auto u32 = [](std::size_t v) { return detail::le32(static_cast<std::uint32_t>(v)); };
  const auto lanes = u32(params.lanes);
  const auto tag = u32(params.tag_bytes);
  const auto mem = u32(params.memory_kib);
  const auto passes = u32(params.iterations);
  const auto version = u32(kVersion);
  const auto type = u32(kTypeId);
  const auto pwd_len = u32(password.size());
  const auto salt_len = u32(salt.size());
  const auto secret_len = u32(secret.size());
  const auto ad_len = u32(associated_data.size());

  std::uint8_t h0[64];
  detail::blake2b(h0, {lanes, tag, mem, passes, version, type, pwd_len, password,
                       salt_len, salt, secret_len, secret, ad_len, associated_data});

  Instance instance(params);
  instance.initialize(h0);
  instance.fill();

  Bytes out(params.tag_bytes);
  instance.finalize(out);
  sodium_memzero(h0, sizeof h0);
  return out;
}

}  // namespace archivesafe
