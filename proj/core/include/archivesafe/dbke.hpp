#pragma once

#include "archivesafe/bytes.hpp"
#include "archivesafe/keyless_wrap.hpp"
#include "archivesafe/random.hpp"
#include "archivesafe/symmetric.hpp"

namespace archivesafe {

/// Keyless ciphertext: the wrapped key plus the symmetric ciphertext.
/// The symmetric key itself is never part of this value.
struct DbkeCiphertext {
  WrappedKey wrapped;
  SymCiphertext cipher;
  /// The plaintext under the puzzle is itself iv || body of an inner
  /// ciphertext under a user-held key.
  bool layered = false;

  unsigned difficulty() const noexcept { return wrapped.difficulty(); }
  friend bool operator==(const DbkeCiphertext&, const DbkeCiphertext&) = default;
};

struct DecryptResult {
  Bytes plaintext;
  SolveReport report;
};

/// Wraps a fresh key at the given difficulty and encrypts m under it.
/// Randomness is consumed as seed, salt (if salted), IV.
DbkeCiphertext dbke_encrypt(KdfSuiteId suite, unsigned difficulty, ByteView plaintext,
                            RandomSource& rng, const WrapOptions& options = {});

/// Solves the puzzle, then decrypts.
DecryptResult dbke_decrypt(const DbkeCiphertext& ct, const SolverConfig& config = {},
                           const SolveControl& control = {});

/// Decrypts with a key recovered elsewhere (e.g. by an outsourced solver).
Bytes dbke_decrypt_with_key(const DbkeCiphertext& ct, const SymmetricKey& key);

/// Keyless encryption on the outside, keyed encryption inside:
/// dbke_encrypt(d, iv_inner || sym_encrypt(user_key, m)).
DbkeCiphertext layered_encrypt(const SymmetricKey& user_key, KdfSuiteId suite,
                               unsigned difficulty, ByteView plaintext, RandomSource& rng,
                               const WrapOptions& options = {});

DecryptResult layered_decrypt(const SymmetricKey& user_key, const DbkeCiphertext& ct,
                              const SolverConfig& config = {}, const SolveControl& control = {});

/// Inner step of layered_decrypt, for callers that already hold the outer plaintext.
Bytes decrypt_inner_layer(const SymmetricKey& user_key, ByteView outer_plaintext);

/// User key for layered mode: the suite's hash of the passphrase under the
/// passphrase domain byte (0x04).
SymmetricKey passphrase_key(KdfSuiteId suite, std::string_view passphrase);

}  // namespace archivesafe
