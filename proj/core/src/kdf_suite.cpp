#include "archivesafe/kdf_suite.hpp"

#include <string>

#include "archivesafe/argon2.hpp"
#include "archivesafe/error.hpp"
#include "blake2b.hpp"

namespace archivesafe {
namespace {

constexpr KdfParams kArgon2Params{8, 102400, 2, 128};
constexpr KdfParams kBlake2bParams{0, 0, 0, 128};

thread_local std::uint64_t t_kdf_calls = 0;

}  // namespace

std::optional<KdfSuiteId> suite_from_byte(std::uint8_t id) noexcept {
  switch (id) {
    case 1: return KdfSuiteId::Argon2id;
    case 2: return KdfSuiteId::Blake2b;
    default: return std::nullopt;
  }
}

KdfSuiteId parse_suite(std::uint8_t id) {
  if (auto s = suite_from_byte(id)) return *s;
  throw Error(ErrorCode::UnknownSuite, "unknown KDF suite id " + std::to_string(id));
}

std::string_view suite_name(KdfSuiteId suite) noexcept {
  switch (suite) {
    case KdfSuiteId::Argon2id: return "argon2id";
    case KdfSuiteId::Blake2b: return "blake2b-test";
  }
  return "unknown";
}

const KdfParams& suite_params(KdfSuiteId suite) {
  switch (suite) {
    case KdfSuiteId::Argon2id: return kArgon2Params;
    case KdfSuiteId::Blake2b: return kBlake2bParams;
  }
  throw Error(ErrorCode::UnknownSuite, "unknown KDF suite");
}

Digest kdf_hash(KdfSuiteId suite, KdfDomain domain, ByteView input) {
  const std::uint8_t prefix[1] = {static_cast<std::uint8_t>(domain)};
  Digest out;
  switch (suite) {
    case KdfSuiteId::Blake2b:
      detail::ensure_sodium();
      detail::blake2b(out.bytes, {ByteView(prefix), input});
      break;
    case KdfSuiteId::Argon2id: {
      const KdfParams& p = kArgon2Params;
      Bytes message(1 + input.size());
      message[0] = prefix[0];
      std::copy(input.begin(), input.end(), message.begin() + 1);
      const Bytes tag = argon2id({p.parallelism, p.memory_kib, p.iterations, p.output_bits / 8},
                                 message, as_bytes(kArgon2Salt));
      std::copy(tag.begin(), tag.end(), out.bytes.begin());
      break;
    }
    default:
      throw Error(ErrorCode::UnknownSuite, "unknown KDF suite");
  }
  ++t_kdf_calls;
  return out;
}

Digest h1(KdfSuiteId suite, ByteView input) {
  return kdf_hash(suite, KdfDomain::Checksum, input);
}

SymmetricKey h2(KdfSuiteId suite, ByteView input) {
  return SymmetricKey{kdf_hash(suite, KdfDomain::Key, input).bytes};
}

std::uint64_t kdf_calls_on_this_thread() noexcept { return t_kdf_calls; }

}  // namespace archivesafe
