#pragma once

#include <optional>

#include "archivesafe/bytes.hpp"
#include "archivesafe/kdf_suite.hpp"
#include "archivesafe/puzzle.hpp"
#include "archivesafe/random.hpp"
#include "archivesafe/solver.hpp"

namespace archivesafe {

/// Puzzle metadata that replaces a stored key: w = (h, partial seed[, salt]).
struct WrappedKey {
  KdfSuiteId suite = KdfSuiteId::Blake2b;
  Digest checksum;
  PartialSeed partial;
  /// The key was derived as H2(r || s).
  bool salted = false;
  /// The salt, when the holder has it. Absent with salted == true means the
  /// view was stripped of its salt and cannot yield the key.
  std::optional<Salt> salt;

  unsigned difficulty() const noexcept { return partial.difficulty(); }
  PublicPuzzle public_view() const { return {suite, checksum, partial}; }

  friend bool operator==(const WrappedKey&, const WrappedKey&) = default;
};

struct WrapOptions {
  bool salted = false;
  bool allow_high_difficulty = false;
};

struct WrapResult {
  SymmetricKey key;
  WrappedKey wrapped;
};

struct UnwrapResult {
  SymmetricKey key;
  SolveReport report;
};

/// Draws the seed (then the salt, if salted) from rng and wraps it.
/// Performs exactly two KDF calls for any difficulty.
WrapResult wrap(KdfSuiteId suite, unsigned difficulty, RandomSource& rng,
                const WrapOptions& options = {});

/// Deterministic core of wrap() for an externally chosen seed and salt.
WrapResult wrap_seed(KdfSuiteId suite, unsigned difficulty, const Seed& seed,
                     const std::optional<Salt>& salt, bool allow_high_difficulty = false);

/// k = H2(r) unsalted, H2(r || s) salted.
SymmetricKey derive_key(KdfSuiteId suite, const Seed& seed, const std::optional<Salt>& salt);

/// Solves the puzzle and derives the key. Throws SaltRequired for a salted
/// wrap whose salt is not in this view, SolveFailure on exhaustion.
UnwrapResult unwrap(const WrappedKey& wrapped, const SolverConfig& config = {},
                    const SolveControl& control = {});

/// Solves the public puzzle and returns the seed (report.seed is always set).
SolveReport recover_seed(const PublicPuzzle& puzzle, const SolverConfig& config = {},
                         const SolveControl& control = {});

/// Removes (target - d) further leading bits of the partial seed.
/// Metadata-only: no KDF calls; checksum, suite and salt are unchanged.
WrappedKey degrade_wrap(const WrappedKey& wrapped, unsigned target_difficulty,
                        bool allow_high_difficulty = false);

}  // namespace archivesafe
