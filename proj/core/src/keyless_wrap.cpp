#include "archivesafe/keyless_wrap.hpp"

#include <string>

#include "archivesafe/error.hpp"

namespace archivesafe {

SymmetricKey derive_key(KdfSuiteId suite, const Seed& seed, const std::optional<Salt>& salt) {
  if (!salt) return h2(suite, seed.view());
  std::array<std::uint8_t, 2 * kLambdaBytes> input{};
  std::copy(seed.bytes.begin(), seed.bytes.end(), input.begin());
  std::copy(salt->bytes.begin(), salt->bytes.end(), input.begin() + kLambdaBytes);
  return h2(suite, input);
}

WrapResult wrap_seed(KdfSuiteId suite, unsigned difficulty, const Seed& seed,
                     const std::optional<Salt>& salt, bool allow_high_difficulty) {
  check_difficulty(difficulty, allow_high_difficulty);
  WrapResult out;
  out.wrapped.suite = suite;
  out.wrapped.partial = PartialSeed::from_seed(seed, difficulty);
  out.wrapped.checksum = h1(suite, seed.view());
  out.wrapped.salted = salt.has_value();
  out.wrapped.salt = salt;
  out.key = derive_key(suite, seed, salt);
  return out;
}

WrapResult wrap(KdfSuiteId suite, unsigned difficulty, RandomSource& rng,
                const WrapOptions& options) {
  suite_params(suite);
  check_difficulty(difficulty, options.allow_high_difficulty);
  const Seed seed = rng.draw<SeedTag>();
  std::optional<Salt> salt;
  if (options.salted) salt = rng.draw<SaltTag>();
  return wrap_seed(suite, difficulty, seed, salt, options.allow_high_difficulty);
}

SolveReport recover_seed(const PublicPuzzle& puzzle, const SolverConfig& config,
                         const SolveControl& control) {
  return solve(SearchSpec{puzzle, config}, control);
}

UnwrapResult unwrap(const WrappedKey& wrapped, const SolverConfig& config,
                    const SolveControl& control) {
  if (wrapped.salted && !wrapped.salt) {
    throw Error(ErrorCode::SaltRequired,
                "wrapped key is salted but the salt is not available to this holder");
  }
  SolveReport report = recover_seed(wrapped.public_view(), config, control);
  return {derive_key(wrapped.suite, *report.seed, wrapped.salt), report};
}

WrappedKey degrade_wrap(const WrappedKey& wrapped, unsigned target_difficulty,
                        bool allow_high_difficulty) {
  const unsigned current = wrapped.difficulty();
  if (target_difficulty < current) {
    throw Error(ErrorCode::CannotReduceDifficulty,
                "cannot lower difficulty from " + std::to_string(current) + " to " +
                    std::to_string(target_difficulty));
  }
  check_difficulty(target_difficulty, allow_high_difficulty);
  WrappedKey out = wrapped;
  out.partial = wrapped.partial.drop_leading(target_difficulty - current);
  return out;
}

}  // namespace archivesafe
