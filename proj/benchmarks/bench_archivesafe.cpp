#include <benchmark/benchmark.h>

#include "archivesafe/container.hpp"
#include "archivesafe/dbke.hpp"
#include "archivesafe/solver.hpp"

using namespace archivesafe;

namespace {

void BM_Blake2bSuite(benchmark::State& state) {
  Seed s{};
  for (auto _ : state) {
    s.bytes = h1(KdfSuiteId::Blake2b, s.view()).bytes;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Blake2bSuite);

void BM_Argon2idSuite(benchmark::State& state) {
  Seed s{};
  for (auto _ : state) {
    s.bytes = h1(KdfSuiteId::Argon2id, s.view()).bytes;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Argon2idSuite)->Unit(benchmark::kMillisecond)->Iterations(5);

// Wrap cost should not move with difficulty.
void BM_Wrap(benchmark::State& state) {
  const auto d = static_cast<unsigned>(state.range(0));
  DeterministicRandom rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(wrap(KdfSuiteId::Blake2b, d, rng));
}
BENCHMARK(BM_Wrap)->Arg(0)->Arg(4)->Arg(16)->Arg(32)->Arg(64);

// Exhaustive search over 2^d candidates; one more bit doubles the time.
void BM_SolveExhaustive(benchmark::State& state) {
  const auto d = static_cast<unsigned>(state.range(0));
  const auto workers = static_cast<unsigned>(state.range(1));
  DeterministicRandom rng(2);
  PublicPuzzle p = wrap(KdfSuiteId::Blake2b, d, rng).wrapped.public_view();
  p.checksum.bytes.fill(0);
  for (auto _ : state) {
    try {
      solve({p, {workers, 0}});
    } catch (const SolveFailure&) {
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) << d);
}
BENCHMARK(BM_SolveExhaustive)
    ->ArgsProduct({{8, 12, 16}, {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_DegradeFile(benchmark::State& state) {
  DeterministicRandom rng(3);
  const Bytes m(static_cast<std::size_t>(state.range(0)), 0x61);
  const Bytes file = serialize(dbke_encrypt(KdfSuiteId::Blake2b, 4, m, rng));
  for (auto _ : state) benchmark::DoNotOptimize(degrade_file(file, 12));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_DegradeFile)->Arg(1 << 10)->Arg(1 << 20);

void BM_SymmetricEncrypt(benchmark::State& state) {
  DeterministicRandom rng(4);
  const SymmetricKey key = rng.draw<KeyTag>();
  const Bytes m(static_cast<std::size_t>(state.range(0)), 0x62);
  for (auto _ : state) benchmark::DoNotOptimize(sym_encrypt(key, m, rng));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SymmetricEncrypt)->Arg(1 << 10)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
