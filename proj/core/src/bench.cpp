#include "archivesafe/bench.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>

#include "archivesafe/error.hpp"
#include "archivesafe/keyless_wrap.hpp"
#include "archivesafe/random.hpp"

namespace archivesafe {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct TimedWrap {
  WrapResult result;
  double ms;
};

// The seed is drawn before the clock starts: random sources refill in blocks,
// and a refill landing on every n-th wrap would skew whichever level sits there.
TimedWrap timed_wrap(const SeriesOptions& options, unsigned d, RandomSource& rng) {
  const Seed seed = rng.draw<SeedTag>();
  const auto start = Clock::now();
  WrapResult w = wrap_seed(options.suite, d, seed, std::nullopt);
  return {std::move(w), ms_since(start)};
}

BenchRow timed_solve(const SeriesOptions& options, const TimedWrap& w) {
  BenchRow row;
  row.difficulty = w.result.wrapped.difficulty();
  row.wrap_ms = w.ms;
  const auto start = Clock::now();
  const SolveReport report = recover_seed(w.result.wrapped.public_view(), {options.workers, 0});
  row.solve_ms = ms_since(start);
  row.candidates = report.candidates_tried;
  return row;
}

}  // namespace

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "series differ in length");
  double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double denom =
      std::sqrt((concordant + discordant + ties_x) * (concordant + discordant + ties_y));
  return denom == 0 ? 0.0 : (concordant - discordant) / denom;
}

SeriesResult run_series(const SeriesOptions& options) {
  if (options.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  std::unique_ptr<RandomSource> rng;
  if (options.rng_seed) {
    rng = std::make_unique<DeterministicRandom>(*options.rng_seed);
  } else {
    rng = std::make_unique<SystemRandom>();
  }

  const auto& levels = options.difficulties;
  for (unsigned d : levels) {
    check_difficulty(d);
    for (unsigned w = 0; w < options.warmup; ++w) timed_solve(options, timed_wrap(options, d, *rng));
  }

  // Wraps are timed round-robin across levels before any solve. Timed right
  // after a long solve, a wrap runs on cold caches, and timed level by level
  // it picks up drift in machine speed; either would make wrap time look like
  // it depends on d.
  std::vector<std::vector<TimedWrap>> wraps(levels.size());
  for (auto& w : wraps) w.reserve(options.trials);
  for (unsigned t = 0; t < options.trials; ++t) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      wraps[i].push_back(timed_wrap(options, levels[i], *rng));
    }
  }

  SeriesResult result;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::vector<double> candidates, wrap_ms, solve_ms;
    for (unsigned t = 0; t < options.trials; ++t) {
      BenchRow row = timed_solve(options, wraps[i][t]);
      row.trial = t;
      candidates.push_back(static_cast<double>(row.candidates));
      wrap_ms.push_back(row.wrap_ms);
      solve_ms.push_back(row.solve_ms);
      result.rows.push_back(row);
    }
    result.levels.push_back({levels[i], options.trials, summarize(candidates), summarize(wrap_ms),
                             summarize(solve_ms)});
  }

  for (std::size_t i = 1; i < result.levels.size(); ++i) {
    const LevelSummary& a = result.levels[i - 1];
    const LevelSummary& b = result.levels[i];
    auto ratio = [](double num, double den) { return den == 0 ? 0.0 : num / den; };
    result.ratios.push_back({a.difficulty, b.difficulty,
                             ratio(b.candidates.mean, a.candidates.mean),
                             ratio(b.wrap_ms.mean, a.wrap_ms.mean),
                             ratio(b.solve_ms.mean, a.solve_ms.mean)});
  }
  return result;
}

void write_csv(std::ostream& out, const SeriesResult& result) {
  out << "difficulty,trial,candidates,wrap_ms,solve_ms\n";
  std::size_t row = 0;
  for (std::size_t level = 0; level < result.levels.size(); ++level) {
    const LevelSummary& s = result.levels[level];
    for (std::size_t t = 0; t < s.trials; ++t, ++row) {
      const BenchRow& r = result.rows[row];
      out << r.difficulty << ',' << r.trial << ',' << r.candidates << ',' << r.wrap_ms << ','
          << r.solve_ms << '\n';
    }
    out << s.difficulty << ",mean," << s.candidates.mean << ',' << s.wrap_ms.mean << ','
        << s.solve_ms.mean << '\n';
    out << s.difficulty << ",stddev," << s.candidates.stddev << ',' << s.wrap_ms.stddev << ','
        << s.solve_ms.stddev << '\n';
    if (level > 0) {
      const LevelRatio& q = result.ratios[level - 1];
      out << q.to << ",ratio_vs_" << q.from << ',' << q.candidates << ',' << q.wrap_ms << ','
          << q.solve_ms << '\n';
    }
  }
}

}  // namespace archivesafe
