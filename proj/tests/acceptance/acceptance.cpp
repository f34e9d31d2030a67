// Acceptance checks AC1-AC8. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Pass criterion ids (e.g. "AC3 AC7") to run a
// subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>

#include "archivesafe/bench.hpp"
#include "archivesafe/container.hpp"
#include "archivesafe/solver_service.hpp"

using namespace archivesafe;
using Clock = std::chrono::steady_clock;

namespace {

constexpr auto kFast = KdfSuiteId::Blake2b;
constexpr auto kSlow = KdfSuiteId::Argon2id;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Encrypt, serialize, parse, solve, decrypt.
bool roundtrip(KdfSuiteId suite, unsigned d, ByteView m, bool salted, RandomSource& rng) {
  const Bytes file = serialize(dbke_encrypt(suite, d, m, rng, {.salted = salted}));
  const ParsedContainer parsed = parse(file);
  return dbke_decrypt(parsed.ciphertext).plaintext == Bytes(m.begin(), m.end());
}

Outcome ac1_correctness() {
  const auto start = Clock::now();
  SystemRandom rng;
  int ok_fast = 0, ok_slow = 0;
  for (int i = 0; i < 500; ++i) {
    std::uint8_t pick[3];
    rng.fill(pick);
    Bytes m((pick[0] | pick[1] << 8) % 4096);
    rng.fill(m);
    ok_fast += roundtrip(kFast, pick[2] % 13, m, pick[2] & 0x80, rng);
  }
  for (unsigned i = 0; i < 20; ++i) {
    Bytes m(100 + i * 37);
    rng.fill(m);
    ok_slow += roundtrip(kSlow, i % 7, m, i % 2 == 1, rng);
  }
  const double elapsed = seconds_since(start);
  return {ok_fast == 500 && ok_slow == 20 && elapsed < 120,
          fmt("suite 2: %d/500, suite 1: %d/20 roundtrips, %.1f s (limit 120 s)", ok_fast, ok_slow,
              elapsed)};
}

Outcome ac2_degrade_equivalence() {
  DeterministicRandom pick_rng(2024);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    std::uint8_t pick[5];
    pick_rng.fill(pick);
    const unsigned d = pick[0] % 40;
    const unsigned target = d + pick[1] % 9;
    const bool salted = pick[2] & 1, layered = pick[2] & 2, checksum = pick[2] & 4;
    const std::uint64_t seed = 1'000'000 + static_cast<std::uint64_t>(i);
    Bytes m(pick[3] * 5u + pick[4]);
    pick_rng.fill(m);

    auto encrypt_at = [&](unsigned level) {
      DeterministicRandom rng(seed);
      const SymmetricKey user{};
      DbkeCiphertext ct = layered ? layered_encrypt(user, kFast, level, m, rng, {.salted = salted})
                                  : dbke_encrypt(kFast, level, m, rng, {.salted = salted});
      return serialize(ct, {.body_checksum = checksum});
    };
    equal += degrade_file(encrypt_at(d), target) == encrypt_at(target);
  }
  return {equal == 100, fmt("%d/100 bit-identical", equal)};
}

Outcome ac3_scaling() {
  const auto start = Clock::now();
  const SeriesResult r =
      run_series({.suite = kFast, .difficulties = {4, 8, 12}, .trials = 500, .warmup = 5});
  bool pass = true;
  std::string detail;
  for (const LevelRatio& q : r.ratios) {
    pass = pass && q.candidates >= 12.8 && q.candidates <= 19.2;
    detail += fmt("d%u->d%u candidates x%.2f (solve time x%.2f); ", q.from, q.to, q.candidates,
                  q.solve_ms);
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 60;
  return {pass, detail + fmt("band [12.8, 19.2], %.1f s", elapsed)};
}

// Alternates the two levels so drift in machine speed hits both equally.
double wrap_time_ratio(KdfSuiteId suite, int rounds) {
  SystemRandom rng;
  double low = 0, high = 0;
  for (int i = 0; i < rounds; ++i) {
    for (unsigned d : {4u, 16u}) {
      const auto t = Clock::now();
      const WrapResult w = wrap(suite, d, rng);
      (d == 4 ? low : high) += seconds_since(t);
    }
  }
  return high / low;
}

Outcome ac4_constant_write_cost() {
  SystemRandom rng;
  bool counts_ok = true;
  for (unsigned d = 0; d <= kLambdaBits; ++d) {
    for (bool salted : {false, true}) {
      for (KdfSuiteId suite : {kFast}) {
        const auto before = kdf_calls_on_this_thread();
        wrap(suite, d, rng, {.salted = salted, .allow_high_difficulty = true});
        counts_ok = counts_ok && kdf_calls_on_this_thread() - before == 2;
      }
    }
  }
  for (unsigned d : {4u, 16u}) {
    const auto before = kdf_calls_on_this_thread();
    wrap(kSlow, d, rng);
    counts_ok = counts_ok && kdf_calls_on_this_thread() - before == 2;
  }

  wrap_time_ratio(kFast, 2000);  // warm-up
  const double fast = wrap_time_ratio(kFast, 50000);
  const double slow = wrap_time_ratio(kSlow, 8);
  const bool ratios_ok = fast >= 0.8 && fast <= 1.2 && slow >= 0.8 && slow <= 1.2;
  return {counts_ok && ratios_ok,
          fmt("2 KDF calls at every d in 0..128: %s; wrap time d16/d4: suite 2 %.3f, suite 1 %.3f "
              "(band [0.8, 1.2])",
              counts_ok ? "yes" : "no", fast, slow)};
}

Outcome ac5_parameters() {
  const KdfParams& p = suite_params(kSlow);
  const bool pass = p.parallelism == 8 && p.memory_kib == 102400 && p.iterations == 2 &&
                    p.output_bits == 128;
  return {pass, fmt("suite 1 = (parallelism %u, %u KiB, %u iterations, %u-bit output)",
                    p.parallelism, p.memory_kib, p.iterations, p.output_bits)};
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

Outcome ac6_outsourcing_blindness() {
  std::mutex mu;
  std::string wire;
  SolverService service({.cap = 16, .request_observer = [&](const std::string& raw) {
                           std::lock_guard lock(mu);
                           wire += raw;
                         }});
  const std::string url = "http://127.0.0.1:" + std::to_string(service.start());

  SystemRandom rng;
  std::vector<Salt> salts;
  int keys_equal = 0;
  for (int i = 0; i < 100; ++i) {
    const WrapResult w = wrap(kFast, 10, rng, {.salted = true});
    salts.push_back(*w.wrapped.salt);
    const RemoteSolveResult remote = solve_remote(url, w.wrapped);
    keys_equal += remote.key == unwrap(w.wrapped).key && remote.key == w.key;
  }
  service.stop();

  int leaks = 0;
  const Bytes wire_bytes(wire.begin(), wire.end());
  for (const Salt& s : salts) {
    const std::string hex = to_hex(s);
    leaks += contains(wire_bytes, s.view()) || wire.find(hex) != std::string::npos ||
             wire.find(upper(hex)) != std::string::npos;
  }
  const bool pass = keys_equal == 100 && leaks == 0 && !wire.empty();
  return {pass, fmt("%d/100 remote keys equal local unwrap; salt found in capture: %d times "
                    "(%zu bytes captured)",
                    keys_equal, leaks, wire.size())};
}

Outcome ac7_expected_rank() {
  SystemRandom rng;
  double total = 0;
  for (int i = 0; i < 1000; ++i) {
    const WrapResult w = wrap(kFast, 10, rng);
    total += static_cast<double>(unwrap(w.wrapped, {1, 0}).report.candidates_tried);
  }
  const double mean = total / 1000, expected = (1024.0 + 1) / 2;
  const double dev = std::abs(mean - expected) / expected;
  return {dev <= 0.10, fmt("mean candidates %.1f vs %.1f (%.1f%% off, limit 10%%)", mean,
                           expected, dev * 100)};
}

Outcome ac8_container_robustness() {
  DeterministicRandom rng(88);
  std::vector<Bytes> seeds;
  for (unsigned i = 0; i < 8; ++i) {
    Bytes m(i * 29);
    rng.fill(m);
    DbkeCiphertext ct = dbke_encrypt(kFast, i * 9, m, rng, {.salted = (i & 1) != 0});
    ct.layered = i & 2;
    seeds.push_back(serialize(ct, {.body_checksum = (i & 4) != 0}));
  }

  int classified = 0, parsed = 0, unclassified = 0;
  for (int i = 0; i < 10000; ++i) {
    std::uint8_t pick[8];
    rng.fill(pick);
    Bytes b = seeds[pick[0] % seeds.size()];
    const unsigned flips = 1 + pick[1] % 4;
    for (unsigned f = 0; f < flips; ++f) {
      std::uint8_t where[3];
      rng.fill(where);
      // bias toward the header, where the structure is
      const std::size_t limit = where[2] & 1 ? std::min<std::size_t>(b.size(), 96) : b.size();
      const std::size_t at = (where[0] | where[1] << 8) % limit;
      b[at] ^= static_cast<std::uint8_t>(1u << (where[2] >> 5));
    }
    if (pick[2] & 1) b.resize((pick[3] | pick[4] << 8) % (b.size() + 1));
    try {
      const ParsedContainer p = parse(b);
      ++parsed;
    } catch (const Error&) {
      ++classified;
    } catch (...) {
      ++unclassified;
    }
  }

  int associative = 0;
  for (int i = 0; i < 200; ++i) {
    std::uint8_t pick[4];
    rng.fill(pick);
    const unsigned d = pick[0] % 40, d1 = d + pick[1] % 12, d2 = d1 + pick[2] % 12;
    Bytes m(pick[3]);
    rng.fill(m);
    const Bytes c = serialize(dbke_encrypt(kFast, d, m, rng, {.salted = (pick[3] & 1) != 0}),
                              {.body_checksum = (pick[3] & 2) != 0});
    associative += degrade_file(degrade_file(c, d1), d2) == degrade_file(c, d2);
  }
  return {unclassified == 0 && associative == 200,
          fmt("fuzz: %d classified errors, %d valid parses, %d other; associativity %d/200",
              classified, parsed, unclassified, associative)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"AC1", ac1_correctness},       {"AC2", ac2_degrade_equivalence},
      {"AC3", ac3_scaling},           {"AC4", ac4_constant_write_cost},
      {"AC5", ac5_parameters},        {"AC6", ac6_outsourcing_blindness},
      {"AC7", ac7_expected_rank},     {"AC8", ac8_container_robustness},
  };
  std::set<std::string> wanted(argv + 1, argv + argc);

  int failed = 0;
  for (const auto& [id, check] : checks) {
    if (!wanted.empty() && !wanted.contains(id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << fmt("  [%.1f s]", seconds_since(start)) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
