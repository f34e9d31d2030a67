#include "archivesafe/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace archivesafe {
namespace {

using Clock = std::chrono::steady_clock;
constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kDeadlinePollMask = 63;

// Builds candidate seeds by writing the prefix into the top d bits of the
// known suffix. Only the first eight bytes change (d <= 64).
class CandidateBuilder {
 public:
  explicit CandidateBuilder(const PartialSeed& partial)
      : base_(partial.known_suffix()), d_(partial.difficulty()) {
    for (int i = 0; i < 8; ++i) hi_ = (hi_ << 8) | base_.bytes[i];
  }

  const Seed& at(std::uint64_t prefix) {
    std::uint64_t hi = hi_;
    if (d_ == 64) {
      hi = prefix;
    } else if (d_ > 0) {
      hi |= prefix << (64 - d_);
    }
    for (int i = 7; i >= 0; --i) {
      base_.bytes[i] = static_cast<std::uint8_t>(hi);
      hi >>= 8;
    }
    return base_;
  }

 private:
  Seed base_;
  unsigned d_;
  std::uint64_t hi_ = 0;
};

struct SharedState {
  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> best{kNone};
  std::atomic<std::uint64_t> tried{0};
  std::atomic<bool> abort{false};
  std::atomic<int> abort_reason{0};  // ErrorCode + 1 when set
  std::mutex mu;                     // progress + dispatch log + error
  std::exception_ptr error;
};

void lower_best(std::atomic<std::uint64_t>& best, std::uint64_t value) {
  std::uint64_t cur = best.load();
  while (value < cur && !best.compare_exchange_weak(cur, value)) {
  }
}

class Search {
 public:
  Search(const SearchSpec& spec, const SolveControl& control)
      : spec_(spec), control_(control), d_(spec.puzzle.difficulty()) {
    last_ = d_ == 64 ? kNone : (std::uint64_t{1} << d_) - 1;
    chunk_ = spec.config.chunk ? spec.config.chunk : default_chunk(spec.puzzle.suite);
    chunks_ = last_ / chunk_ + 1;
    if (last_ / chunk_ == kNone) chunks_ = kNone;
  }

  std::uint64_t chunk_count() const { return chunks_; }

  void run_worker() {
    try {
      worker_loop();
    } catch (...) {
      std::lock_guard lock(state_.mu);
      if (!state_.error) state_.error = std::current_exception();
      state_.abort = true;
    }
  }

  SharedState& state() { return state_; }

 private:
  void raise_abort(ErrorCode code) {
    int expected = 0;
    state_.abort_reason.compare_exchange_strong(expected, static_cast<int>(code) + 1);
    state_.abort = true;
  }

  bool should_stop(std::uint64_t evaluated) {
    if (state_.abort.load(std::memory_order_relaxed)) return true;
    if (control_.stop.stop_requested()) {
      raise_abort(ErrorCode::Cancelled);
      return true;
    }
    if (control_.deadline && (evaluated & kDeadlinePollMask) == 0 &&
        Clock::now() >= *control_.deadline) {
      raise_abort(ErrorCode::SolveTimeout);
      return true;
    }
    return false;
  }

  void worker_loop() {
    CandidateBuilder builder(spec_.puzzle.partial);
    const KdfSuiteId suite = spec_.puzzle.suite;
    const Digest& target = spec_.puzzle.checksum;
    std::uint64_t evaluated = 0;

    for (;;) {
      const std::uint64_t index = state_.next_chunk.fetch_add(1);
      if (index >= chunks_) return;
      const std::uint64_t first = index * chunk_;
      if (first > state_.best.load()) return;
      const std::uint64_t last = last_ - first < chunk_ - 1 ? last_ : first + (chunk_ - 1);
      if (control_.dispatch_log) {
        std::lock_guard lock(state_.mu);
        control_.dispatch_log->push_back({first, last});
      }

      std::uint64_t local = 0;
      for (std::uint64_t prefix = first;; ++prefix) {
        if (should_stop(evaluated) || prefix > state_.best.load(std::memory_order_relaxed)) {
          state_.tried += local;
          return;
        }
        ++evaluated;
        ++local;
        if (h1(suite, builder.at(prefix).view()) == target) {
          lower_best(state_.best, prefix);
          state_.tried += local;
          return;
        }
        if (prefix == last) break;
      }

      const std::uint64_t total = state_.tried += local;
      if (control_.progress) {
        std::lock_guard lock(state_.mu);
        control_.progress(total);
      }
    }
  }

  const SearchSpec& spec_;
  const SolveControl& control_;
  unsigned d_;
  std::uint64_t last_ = 0;  // highest prefix, 2^d - 1
  std::uint64_t chunk_ = 1;
  std::uint64_t chunks_ = 1;
  SharedState state_;
};

}  // namespace

unsigned default_workers() noexcept {
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t default_chunk(KdfSuiteId suite) noexcept {
  return suite == KdfSuiteId::Argon2id ? 1 : 1024;
}

SolveReport solve(const SearchSpec& spec, const SolveControl& control) {
  const unsigned d = spec.puzzle.difficulty();
  if (d > kMaxSolvableDifficulty) {
    throw Error(ErrorCode::DifficultyOutOfRange,
                "search supports at most " + std::to_string(kMaxSolvableDifficulty) +
                    " missing bits, puzzle has " + std::to_string(d));
  }
  suite_params(spec.puzzle.suite);  // rejects unknown ids before any threads start

  const auto started = Clock::now();
  Search search(spec, control);
  const unsigned requested = spec.config.workers ? spec.config.workers : default_workers();
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(requested, search.chunk_count()));

  if (workers <= 1) {
    search.run_worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back([&search] { search.run_worker(); });
  }

  SharedState& st = search.state();
  if (st.error) std::rethrow_exception(st.error);

  SolveReport report;
  report.candidates_tried = st.tried.load();
  report.workers_used = std::max(1u, workers);
  report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - started);

  if (const std::uint64_t best = st.best.load(); best != kNone) {
    report.seed = spec.puzzle.partial.candidate(best);
    return report;
  }
  if (const int reason = st.abort_reason.load(); reason != 0) {
    const auto code = static_cast<ErrorCode>(reason - 1);
    throw SolveFailure(code, code == ErrorCode::Cancelled ? "search cancelled" : "search deadline exceeded",
                       report);
  }
  throw SolveFailure(ErrorCode::ExhaustedNoSolution,
                     "no candidate matches the checksum (corrupted metadata?)", report);
}

std::chrono::duration<double> estimate_cost(unsigned difficulty,
                                            std::chrono::duration<double> kdf_time) {
  if (difficulty == 0) return kdf_time;
  return std::ldexp(1.0, static_cast<int>(difficulty) - 1) * kdf_time;
}

}  // namespace archivesafe
