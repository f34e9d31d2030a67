#pragma once

#include <cstdint>

#include "archivesafe/bytes.hpp"

namespace archivesafe {

struct Argon2Params {
  std::uint32_t lanes = 1;
  std::uint32_t memory_kib = 8;
  std::uint32_t iterations = 1;
  std::uint32_t tag_bytes = 16;
};

/// Argon2id, version 0x13, as standardized in RFC 9106.
///
/// Lanes are filled sequentially on the calling thread; the memory matrix is
/// allocated per call and released before returning. Throws
/// Error(InvalidArgument) for parameters outside the RFC limits (lanes in
/// [1, 2^24), memory >= 8 * lanes KiB, iterations >= 1, tag >= 4 bytes,
/// salt >= 8 bytes).
Bytes argon2id(const Argon2Params& params, ByteView password, ByteView salt,
               ByteView secret = {}, ByteView associated_data = {});

}  // namespace archivesafe
