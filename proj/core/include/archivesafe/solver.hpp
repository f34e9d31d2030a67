#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stop_token>
#include <vector>

#include "archivesafe/error.hpp"
#include "archivesafe/puzzle.hpp"

namespace archivesafe {

/// Largest number of missing bits the search engine enumerates.
inline constexpr unsigned kMaxSolvableDifficulty = 64;

struct SolverConfig {
  unsigned workers = 0;      // 0: hardware concurrency
  std::uint64_t chunk = 0;   // 0: suite default (1024 for Blake2b, 1 for Argon2id)
};

struct SearchSpec {
  PublicPuzzle puzzle;
  SolverConfig config;
};

/// Inclusive range [first, last] of candidate prefixes handed to one worker.
struct ChunkRange {
  std::uint64_t first;
  std::uint64_t last;
  friend bool operator==(const ChunkRange&, const ChunkRange&) = default;
};

struct SolveControl {
  std::stop_token stop;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Called at most once per completed chunk with the running candidate count.
  /// Calls are serialized but may come from any worker thread.
  std::function<void(std::uint64_t)> progress;
  /// When set, receives every dispatched chunk.
  std::vector<ChunkRange>* dispatch_log = nullptr;
};

struct SolveReport {
  std::optional<Seed> seed;
  std::uint64_t candidates_tried = 0;
  std::chrono::nanoseconds elapsed{0};
  unsigned workers_used = 0;
};

/// Raised for Cancelled, SolveTimeout and ExhaustedNoSolution; carries the
/// statistics gathered up to that point.
class SolveFailure : public Error {
 public:
  SolveFailure(ErrorCode code, const std::string& message, SolveReport report)
      : Error(code, message), report_(report) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

unsigned default_workers() noexcept;
std::uint64_t default_chunk(KdfSuiteId suite) noexcept;

/// Enumerates the 2^d candidates for the missing bits and returns the first
/// whose H1 digest equals the checksum.
///
/// The prefix space is cut into contiguous chunks handed out in ascending
/// order from a shared counter. Once a match at prefix p is known, chunks
/// starting above p are not started, and a worker abandons its chunk past p,
/// so the returned seed is the lowest matching prefix for every worker count.
/// With one worker the enumeration is strictly ascending and
/// candidates_tried equals the match's rank + 1. Stop requests and the
/// deadline are polled between candidates.
SolveReport solve(const SearchSpec& spec, const SolveControl& control = {});

/// Expected wall time of a single-threaded solve: 2^(d-1) KDF calls, or one
/// call at d = 0.
std::chrono::duration<double> estimate_cost(unsigned difficulty,
                                            std::chrono::duration<double> kdf_time);

}  // namespace archivesafe
