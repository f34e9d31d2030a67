#include <doctest.h>

#include <algorithm>
#include <thread>

#include "archivesafe/keyless_wrap.hpp"
#include "archivesafe/solver.hpp"

using namespace archivesafe;
using namespace std::chrono_literals;

namespace {

constexpr auto kFast = KdfSuiteId::Blake2b;

PublicPuzzle puzzle_at(unsigned d, std::uint64_t seed) {
  DeterministicRandom rng(seed);
  return wrap(kFast, d, rng).wrapped.public_view();
}

PublicPuzzle unsolvable_at(unsigned d) {
  PublicPuzzle p = puzzle_at(d, 1);
  p.checksum.bytes.fill(0xee);
  return p;
}

SolveFailure failure_of(const SearchSpec& spec, const SolveControl& control = {}) {
  try {
    solve(spec, control);
  } catch (const SolveFailure& e) {
    return e;
  }
  FAIL("expected SolveFailure");
  return SolveFailure(ErrorCode::Io, "", {});
}

}  // namespace

TEST_CASE("same seed for every worker count") {
  for (std::uint64_t s = 30; s < 40; ++s) {
    const PublicPuzzle p = puzzle_at(14, s);
    const Seed expected = *solve({p, {1, 0}}).seed;
    for (unsigned workers : {2u, 4u, 8u}) {
      for (std::uint64_t chunk : {1ull, 7ull, 1024ull}) {
        CAPTURE(workers);
        CAPTURE(chunk);
        CHECK(*solve({p, {workers, chunk}}).seed == expected);
      }
    }
  }
}

TEST_CASE("single worker tries exactly rank + 1 candidates") {
  const PublicPuzzle p = puzzle_at(12, 41);
  const SolveReport r = solve({p, {1, 5}});
  std::uint64_t rank = 0;
  for (int i = 0; i < 2; ++i) rank = rank << 8 | r.seed->bytes[i];
  rank >>= 4;
  CHECK(r.candidates_tried == rank + 1);
  CHECK(r.workers_used == 1);
}

TEST_CASE("chunks partition the whole prefix space") {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<ChunkRange> log;
    SolveControl control;
    control.dispatch_log = &log;
    const SolveFailure f = failure_of({unsolvable_at(10), {workers, 37}}, control);
    CHECK(f.code() == ErrorCode::ExhaustedNoSolution);
    CHECK(f.report().candidates_tried == 1024);

    std::sort(log.begin(), log.end(), [](auto& a, auto& b) { return a.first < b.first; });
    REQUIRE_FALSE(log.empty());
    CHECK(log.front().first == 0);
    CHECK(log.back().last == 1023);
    for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i].first == log[i - 1].last + 1);
  }
}

TEST_CASE("d=0 and full 64-bit range boundaries") {
  const SolveReport r = solve({puzzle_at(0, 2), {}});
  CHECK(r.candidates_tried == 1);

  // a 64-bit puzzle whose removed bits are all zero is found at once
  Seed seed{};
  seed.bytes[15] = 1;
  const PublicPuzzle p = wrap_seed(kFast, 64, seed, std::nullopt).wrapped.public_view();
  CHECK(*solve({p, {2, 0}}).seed == seed);
}

TEST_CASE("difficulty above 64 is refused") {
  DeterministicRandom rng(3);
  const PublicPuzzle p = wrap(kFast, 65, rng, {.allow_high_difficulty = true}).wrapped.public_view();
  try {
    solve({p, {}});
    FAIL("expected DifficultyOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DifficultyOutOfRange);
  }
}

TEST_CASE("stop request cancels the search") {
  std::stop_source source;
  SolveControl control;
  control.stop = source.get_token();
  std::uint64_t last = 0;
  control.progress = [&](std::uint64_t n) {
    last = n;
    if (n >= 4096) source.request_stop();
  };
  const SolveFailure f = failure_of({unsolvable_at(30), {1, 1024}}, control);
  CHECK(f.code() == ErrorCode::Cancelled);
  CHECK(f.report().candidates_tried >= 4096);
  CHECK(f.report().candidates_tried < (1ull << 20));
  CHECK(last >= 4096);
}

TEST_CASE("already-stopped token returns before trying anything substantial") {
  std::stop_source source;
  source.request_stop();
  SolveControl control;
  control.stop = source.get_token();
  CHECK(failure_of({unsolvable_at(40), {4, 0}}, control).code() == ErrorCode::Cancelled);
}

TEST_CASE("deadline stops the search") {
  SolveControl control;
  control.deadline = std::chrono::steady_clock::now() + 50ms;
  const auto start = std::chrono::steady_clock::now();
  const SolveFailure f = failure_of({unsolvable_at(40), {2, 0}}, control);
  CHECK(f.code() == ErrorCode::SolveTimeout);
  CHECK(std::chrono::steady_clock::now() - start < 2s);
}

TEST_CASE("progress is monotone and ends at the total") {
  std::vector<std::uint64_t> seen;
  SolveControl control;
  control.progress = [&](std::uint64_t n) { seen.push_back(n); };
  failure_of({unsolvable_at(12), {3, 256}}, control);
  REQUIRE_FALSE(seen.empty());
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(seen.back() == 4096);
}

TEST_CASE("estimate_cost") {
  const std::chrono::duration<double> t{0.25};
  CHECK(estimate_cost(0, t).count() == doctest::Approx(0.25));
  CHECK(estimate_cost(1, t).count() == doctest::Approx(0.25));
  CHECK(estimate_cost(10, t).count() == doctest::Approx(128.0));
  for (unsigned d = 1; d + 4 <= 60; ++d) {
    CHECK(estimate_cost(d + 4, t) / estimate_cost(d, t) == doctest::Approx(16.0));
  }
}

TEST_CASE("estimate matches a measured single-worker solve within 30%") {
  // Per-call cost measured the same way the solver evaluates candidates.
  constexpr int kCalls = 200000;
  Seed s{};
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kCalls; ++i) {
    s.bytes[0] = static_cast<std::uint8_t>(i);
    s.bytes[1] = static_cast<std::uint8_t>(i >> 8);
    (void)h1(kFast, s.view());
  }
  const std::chrono::duration<double> per_call = (std::chrono::steady_clock::now() - t0) / kCalls;

  constexpr int kTrials = 200;
  std::chrono::duration<double> total{0};
  for (int i = 0; i < kTrials; ++i) {
    const PublicPuzzle p = puzzle_at(12, 1000 + i);
    const auto start = std::chrono::steady_clock::now();
    solve({p, {1, 0}});
    total += std::chrono::steady_clock::now() - start;
  }
  const double measured = total.count() / kTrials;
  const double predicted = estimate_cost(12, per_call).count();
  MESSAGE("d=12 measured " << measured * 1e3 << " ms, predicted " << predicted * 1e3 << " ms");
  CHECK(measured / predicted >= 0.7);
  CHECK(measured / predicted <= 1.3);
}

TEST_CASE("more workers finish faster on multi-core hosts") {
  if (std::thread::hardware_concurrency() < 2) {
    MESSAGE("skipped: single hardware thread");
    return;
  }
  const PublicPuzzle p = unsolvable_at(18);
  auto time_with = [&](unsigned workers) {
    const auto start = std::chrono::steady_clock::now();
    try {
      solve({p, {workers, 0}});
    } catch (const SolveFailure&) {
    }
    return std::chrono::steady_clock::now() - start;
  };
  const unsigned many = std::min(4u, std::thread::hardware_concurrency());
  CHECK(time_with(many) < time_with(1));
}
