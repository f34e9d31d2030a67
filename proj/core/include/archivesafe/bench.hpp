#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "archivesafe/kdf_suite.hpp"

namespace archivesafe {

struct BenchRow {
  unsigned difficulty = 0;
  unsigned trial = 0;
  std::uint64_t candidates = 0;
  double wrap_ms = 0;
  double solve_ms = 0;
};

struct Summary {
  double mean = 0;
  double stddev = 0;  // sample standard deviation (n - 1)
};

struct LevelSummary {
  unsigned difficulty = 0;
  std::size_t trials = 0;
  Summary candidates;
  Summary wrap_ms;
  Summary solve_ms;
};

/// Ratio of means between two adjacent requested levels (to / from).
struct LevelRatio {
  unsigned from = 0;
  unsigned to = 0;
  double candidates = 0;
  double wrap_ms = 0;
  double solve_ms = 0;
};

struct SeriesOptions {
  KdfSuiteId suite = KdfSuiteId::Blake2b;
  std::vector<unsigned> difficulties;
  unsigned trials = 1;
  unsigned warmup = 5;
  unsigned workers = 1;
  /// Fixed randomness for reproducible candidate counts; system RNG otherwise.
  std::optional<std::uint64_t> rng_seed;
};

struct SeriesResult {
  std::vector<BenchRow> rows;
  std::vector<LevelSummary> levels;
  std::vector<LevelRatio> ratios;
};

Summary summarize(std::span<const double> values);

/// Kendall rank correlation (tau-b) between two equally sized series.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Runs `trials` wraps and solves per difficulty, in the order given, after
/// `warmup` discarded runs per level. Wraps are timed round-robin across
/// levels before any solve. Timing uses steady_clock.
SeriesResult run_series(const SeriesOptions& options);

/// CSV with columns difficulty,trial,candidates,wrap_ms,solve_ms. Per level
/// a "mean" and a "stddev" row follow the trials; a "ratio" row compares each
/// level with the previous one.
void write_csv(std::ostream& out, const SeriesResult& result);

}  // namespace archivesafe
