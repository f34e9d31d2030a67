#include "archivesafe/dbke.hpp"

#include "archivesafe/error.hpp"

namespace archivesafe {

DbkeCiphertext dbke_encrypt(KdfSuiteId suite, unsigned difficulty, ByteView plaintext,
                            RandomSource& rng, const WrapOptions& options) {
  if (plaintext.size() > kMaxPlaintextBytes) {
    throw Error(ErrorCode::MessageTooLarge, "plaintext exceeds the 1 GiB limit");
  }
  WrapResult wrapped = wrap(suite, difficulty, rng, options);
  DbkeCiphertext out;
  out.cipher = sym_encrypt(wrapped.key, plaintext, rng);
  out.wrapped = std::move(wrapped.wrapped);
  secure_wipe(wrapped.key);
  return out;
}

Bytes dbke_decrypt_with_key(const DbkeCiphertext& ct, const SymmetricKey& key) {
  return sym_decrypt(key, ct.cipher);
}

DecryptResult dbke_decrypt(const DbkeCiphertext& ct, const SolverConfig& config,
                           const SolveControl& control) {
  UnwrapResult unwrapped = unwrap(ct.wrapped, config, control);
  DecryptResult out{dbke_decrypt_with_key(ct, unwrapped.key), unwrapped.report};
  secure_wipe(unwrapped.key);
  return out;
}

DbkeCiphertext layered_encrypt(const SymmetricKey& user_key, KdfSuiteId suite,
                               unsigned difficulty, ByteView plaintext, RandomSource& rng,
                               const WrapOptions& options) {
  if (plaintext.size() + kBlockBytes + kBlockBytes > kMaxPlaintextBytes) {
    throw Error(ErrorCode::MessageTooLarge, "plaintext exceeds the 1 GiB limit");
  }
  const SymCiphertext inner = sym_encrypt(user_key, plaintext, rng);
  Bytes serialized(inner.iv.bytes.begin(), inner.iv.bytes.end());
  serialized.insert(serialized.end(), inner.body.begin(), inner.body.end());
  DbkeCiphertext out = dbke_encrypt(suite, difficulty, serialized, rng, options);
  out.layered = true;
  return out;
}

Bytes decrypt_inner_layer(const SymmetricKey& user_key, ByteView outer_plaintext) {
  if (outer_plaintext.size() < 2 * kBlockBytes ||
      outer_plaintext.size() % kBlockBytes != 0) {
    throw Error(ErrorCode::PaddingInvalid, "inner layer is not a well-formed ciphertext");
  }
  SymCiphertext inner;
  std::copy_n(outer_plaintext.begin(), kBlockBytes, inner.iv.bytes.begin());
  inner.body.assign(outer_plaintext.begin() + kBlockBytes, outer_plaintext.end());
  return sym_decrypt(user_key, inner);
}

DecryptResult layered_decrypt(const SymmetricKey& user_key, const DbkeCiphertext& ct,
                              const SolverConfig& config, const SolveControl& control) {
  if (!ct.layered) {
    throw Error(ErrorCode::InvalidArgument, "ciphertext has no inner keyed layer");
  }
  DecryptResult outer = dbke_decrypt(ct, config, control);
  return {decrypt_inner_layer(user_key, outer.plaintext), outer.report};
}

SymmetricKey passphrase_key(KdfSuiteId suite, std::string_view passphrase) {
  return SymmetricKey{kdf_hash(suite, KdfDomain::Passphrase, as_bytes(passphrase)).bytes};
}

}  // namespace archivesafe
