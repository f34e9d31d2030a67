#include "cli.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "archivesafe/bench.hpp"
#include "archivesafe/container.hpp"
#include "archivesafe/solver_service.hpp"

namespace archivesafe::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Thrown for bad flag combinations found after CLI11 parsing.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return data;
}

// Write to a temporary file beside the target, then rename over it, so a
// reader never sees a partial file.
void write_atomic(const fs::path& path, ByteView data,
                  std::optional<fs::file_time_type> mtime = std::nullopt) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::string tmpl = (dir / ("." + path.filename().string() + ".XXXXXX")).string();
  const int fd = ::mkstemp(tmpl.data());
  if (fd < 0) throw Error(ErrorCode::Io, "cannot create a temporary file in " + dir.string());
  const fs::path tmp = tmpl;
  auto fail = [&](const std::string& what) {
    const int saved = errno;
    ::close(fd);
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::Io, what + ": " + std::strerror(saved));
  };

  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("cannot write " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  // An existing file keeps its permissions; mkstemp's 0600 would otherwise stick.
  std::error_code perm_ec;
  const auto existing = fs::status(path, perm_ec);
  const mode_t mode = fs::exists(existing) ? static_cast<mode_t>(existing.permissions()) & 07777
                                           : 0644;
  if (::fchmod(fd, mode) != 0 || ::fsync(fd) != 0) fail("cannot flush " + tmp.string());
  if (::close(fd) != 0) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::Io, "cannot close " + tmp.string());
  }

  std::error_code ec;
  if (mtime) fs::last_write_time(tmp, *mtime, ec);
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::Io, "cannot replace " + path.string() + ": " + ec.message());
  }
}

std::string passphrase_from_env(const std::string& var) {
  const char* value = std::getenv(var.c_str());
  if (!value || !*value) throw ConfigError("environment variable " + var + " is not set or empty");
  return value;
}

const std::map<std::string, KdfSuiteId> kSuiteNames = {
    {"1", KdfSuiteId::Argon2id},
    {"argon2id", KdfSuiteId::Argon2id},
    {"2", KdfSuiteId::Blake2b},
    {"blake2b", KdfSuiteId::Blake2b},
};

std::string describe(const SolveReport& r) {
  std::ostringstream s;
  s << "solved: candidates=" << r.candidates_tried << " elapsed="
    << std::chrono::duration<double, std::milli>(r.elapsed).count() << " ms workers="
    << r.workers_used;
  return s.str();
}

struct EncryptArgs {
  std::string input, output;
  KdfSuiteId suite = KdfSuiteId::Argon2id;
  unsigned difficulty = 0;
  bool salted = false;
  bool layered = false;
  std::string passphrase_env;
  bool no_body_checksum = false;
  bool force_high = false;
};

int cmd_encrypt(const EncryptArgs& a, std::ostream& out) {
  if (a.layered && a.passphrase_env.empty()) {
    throw ConfigError("--layered needs --passphrase-env VAR");
  }
  if (!a.layered && !a.passphrase_env.empty()) {
    throw ConfigError("--passphrase-env is only used with --layered");
  }
  check_difficulty(a.difficulty, a.force_high);
  const fs::path target = a.output.empty() ? fs::path(a.input + ".asaf") : fs::path(a.output);

  const Bytes plaintext = read_file(a.input);
  SystemRandom rng;
  const WrapOptions wrap_options{.salted = a.salted, .allow_high_difficulty = a.force_high};
  DbkeCiphertext ct;
  if (a.layered) {
    SymmetricKey user = passphrase_key(a.suite, passphrase_from_env(a.passphrase_env));
    ct = layered_encrypt(user, a.suite, a.difficulty, plaintext, rng, wrap_options);
    secure_wipe(user);
  } else {
    ct = dbke_encrypt(a.suite, a.difficulty, plaintext, rng, wrap_options);
  }
  const Bytes encoded = serialize(ct, {.body_checksum = !a.no_body_checksum});
  write_atomic(target, encoded);
  out << "wrote " << target.string() << ": " << encoded.size() << " bytes, difficulty "
      << a.difficulty << ", suite " << static_cast<int>(a.suite) << " (" << suite_name(a.suite)
      << ")" << (a.salted ? ", salted" : "") << (a.layered ? ", layered" : "") << "\n";
  return kExitOk;
}

struct DecryptArgs {
  std::string input, output;
  unsigned workers = 0;
  std::string remote;
  bool local = false;
  bool allow_unsalted = false;
  std::string passphrase_env;
};

int cmd_decrypt(const DecryptArgs& a, std::ostream& out, std::ostream& err) {
  fs::path target;
  if (!a.output.empty()) {
    target = a.output;
  } else if (fs::path(a.input).extension() == ".asaf") {
    target = fs::path(a.input).replace_extension();
  } else {
    target = a.input + ".dec";
  }

  const ParsedContainer parsed = parse(read_file(a.input));
  const DbkeCiphertext& ct = parsed.ciphertext;
  if (ct.layered && a.passphrase_env.empty()) {
    throw ConfigError("container is layered: --passphrase-env VAR is required");
  }
  if (!ct.layered && !a.passphrase_env.empty()) {
    throw ConfigError("container is not layered; --passphrase-env does not apply");
  }

  Bytes plaintext;
  if (!a.remote.empty()) {
    const RemoteSolveResult r =
        solve_remote(a.remote, ct.wrapped, {.allow_unsalted = a.allow_unsalted});
    err << "solved remotely: candidates=" << r.candidates_tried << " elapsed=" << r.elapsed_ms
        << " ms\n";
    plaintext = dbke_decrypt_with_key(ct, r.key);
  } else {
    DecryptResult r = dbke_decrypt(ct, {a.workers, 0});
    err << describe(r.report) << "\n";
    plaintext = std::move(r.plaintext);
  }
  if (ct.layered) {
    SymmetricKey user = passphrase_key(ct.wrapped.suite, passphrase_from_env(a.passphrase_env));
    plaintext = decrypt_inner_layer(user, plaintext);
    secure_wipe(user);
  }
  write_atomic(target, plaintext);
  out << "wrote " << target.string() << ": " << plaintext.size() << " bytes\n";
  return kExitOk;
}

struct DegradeArgs {
  std::string path;
  unsigned difficulty = 0;
  std::optional<double> older_than_days;
  unsigned workers = 1;
  bool force_high = false;
};

bool has_container_magic(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::equal(std::begin(magic), std::end(magic), kContainerMagic.begin(),
                                        [](char c, std::uint8_t m) {
                                          return static_cast<std::uint8_t>(c) == m;
                                        });
}

// Keeps the modification time, so age-based policies still see the original write.
void degrade_one(const fs::path& path, unsigned target, bool force_high) {
  const auto mtime = fs::last_write_time(path);
  const Bytes original = read_file(path);
  const Bytes updated = degrade_file(original, target, force_high);
  if (updated != original) write_atomic(path, updated, mtime);
}

int cmd_degrade(const DegradeArgs& a, std::ostream& out, std::ostream& err) {
  check_difficulty(a.difficulty, a.force_high);
  const fs::path root = a.path;
  std::error_code ec;
  if (!fs::exists(root, ec)) throw Error(ErrorCode::Io, root.string() + " does not exist");

  if (!fs::is_directory(root)) {
    degrade_one(root, a.difficulty, a.force_high);
    out << root.string() << ": difficulty " << a.difficulty << "\n";
    return kExitOk;
  }

  const auto now = fs::file_time_type::clock::now();
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    if (a.older_than_days) {
      const auto age = now - entry.last_write_time();
      if (age < std::chrono::duration<double, std::ratio<86400>>(*a.older_than_days)) continue;
    }
    if (!has_container_magic(entry.path())) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::mutex mu;
  int status = kExitOk;
  std::size_t changed = 0, skipped = 0;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const fs::path& p = files[i];
      try {
        degrade_one(p, a.difficulty, a.force_high);
        std::lock_guard lock(mu);
        ++changed;
        out << p.string() << ": difficulty " << a.difficulty << "\n";
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        if (e.code() == ErrorCode::CannotReduceDifficulty) {
          ++skipped;
          out << p.string() << ": skipped, already above " << a.difficulty << "\n";
        } else {
          err << p.string() << ": " << e.what() << "\n";
          status = std::max(status, exit_code_for(e.code()));
        }
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(a.workers, files.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  out << changed << " file(s) at difficulty " << a.difficulty << ", " << skipped
      << " already above\n";
  return status;
}

struct InspectArgs {
  std::string input;
  bool calibrate = false;
};

std::chrono::duration<double> calibrate_kdf(KdfSuiteId suite) {
  Seed probe{};
  unsigned calls = 0;
  const auto start = Clock::now();
  do {
    probe.bytes[0] = static_cast<std::uint8_t>(calls++);
    (void)h1(suite, probe.view());
  } while (Clock::now() - start < std::chrono::milliseconds(50) && calls < 1'000'000);
  return std::chrono::duration<double>(Clock::now() - start) / calls;
}

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + a.input);
  const auto size = fs::file_size(a.input);
  std::optional<std::chrono::duration<double>> kdf_time;
  if (a.calibrate) {
    // the suite is byte 5 of the header
    char prefix[6] = {};
    in.read(prefix, 6);
    in.seekg(0);
    if (auto suite = suite_from_byte(static_cast<std::uint8_t>(prefix[5]))) {
      kdf_time = calibrate_kdf(*suite);
    }
  }
  const ContainerInfo info = inspect(in, size, kdf_time);
  out << format_info(info);
  if (kdf_time) out << "kdf call (measured): " << kdf_time->count() * 1e6 << " us\n";
  return kExitOk;
}

struct BenchArgs {
  KdfSuiteId suite = KdfSuiteId::Blake2b;
  std::vector<unsigned> difficulties = {4, 8};
  unsigned trials = 200;
  unsigned warmup = 5;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  std::string output;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const SeriesResult result = run_series({.suite = a.suite,
                                          .difficulties = a.difficulties,
                                          .trials = a.trials,
                                          .warmup = a.warmup,
                                          .workers = a.workers,
                                          .rng_seed = a.seed});
  if (a.output.empty()) {
    write_csv(out, result);
  } else {
    std::ostringstream csv;
    write_csv(csv, result);
    const std::string text = csv.str();
    write_atomic(a.output, as_bytes(text));
  }
  return kExitOk;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned cap = 32;
  unsigned workers = 0;
  unsigned max_concurrent = 4;
};

int cmd_serve(const ServeArgs& a, std::ostream& out) {
  ServiceConfig config;
  config.host = a.host;
  config.port = a.port;
  config.cap = resolve_solver_cap(a.cap);
  config.workers = a.workers;
  config.max_concurrent = a.max_concurrent;

  // Block the shutdown signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SolverService service(config);
  const int port = service.start();
  out << "listening on " << a.host << ":" << port << " (cap " << config.cap << ")" << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  service.stop();
  out << "stopped\n";
  return kExitOk;
}

void add_suite_option(CLI::App* cmd, KdfSuiteId& suite) {
  cmd->add_option("--suite", suite, "KDF suite: 1|argon2id (default for files), 2|blake2b (fast, for tests)")
      ->transform(CLI::CheckedTransformer(kSuiteNames, CLI::ignore_case));
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::Transport:
      return kExitIo;
    case ErrorCode::ExhaustedNoSolution:
    case ErrorCode::SolveTimeout:
    case ErrorCode::Cancelled:
      return kExitNoSolution;
    case ErrorCode::PaddingInvalid:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::BadMagic:
    case ErrorCode::UnsupportedVersion:
    case ErrorCode::TruncatedInput:
    case ErrorCode::MalformedLengths:
    case ErrorCode::MalformedFlags:
    case ErrorCode::UnknownSuite:
    case ErrorCode::ServerReturnedInvalidSeed:
      return kExitCorrupt;
    case ErrorCode::CannotReduceDifficulty:
      return kExitCannotReduce;
    case ErrorCode::DifficultyOutOfRange:
    case ErrorCode::SaltRequired:
    case ErrorCode::MessageTooLarge:
    case ErrorCode::MalformedRequest:
    case ErrorCode::DifficultyTooHigh:
    case ErrorCode::InvalidArgument:
      return kExitConfig;
  }
  return kExitConfig;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"archivesafe: archival encryption whose decryption costs tunable work"};
  app.name("archivesafe");
  app.require_subcommand(1);

  EncryptArgs enc;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file into a container");
  encrypt->add_option("input", enc.input, "Plaintext file")->required();
  encrypt->add_option("-o,--output", enc.output, "Container path (default: <input>.asaf)");
  add_suite_option(encrypt, enc.suite);
  encrypt->add_option("-d,--difficulty", enc.difficulty, "Puzzle difficulty in bits")->required();
  encrypt->add_flag("--salted", enc.salted, "Salt the key so solving can be outsourced");
  encrypt->add_flag("--layered", enc.layered, "Add an inner layer under a passphrase key");
  encrypt->add_option("--passphrase-env", enc.passphrase_env,
                      "Environment variable holding the passphrase");
  encrypt->add_flag("--no-body-checksum", enc.no_body_checksum, "Omit the body checksum");
  encrypt->add_flag("--force-high-difficulty", enc.force_high,
                    "Allow difficulty above 64 (not solvable by this tool)");

  DecryptArgs dec;
  auto* decrypt = app.add_subcommand("decrypt", "Solve the puzzle and decrypt a container");
  decrypt->add_option("input", dec.input, "Container file")->required();
  decrypt->add_option("-o,--output", dec.output,
                      "Plaintext path (default: input without .asaf, else <input>.dec)");
  decrypt->add_option("--workers", dec.workers, "Solver threads (default: all cores)");
  auto* remote = decrypt->add_option("--remote", dec.remote, "Solver service URL");
  auto* local = decrypt->add_flag("--local", dec.local, "Solve on this machine (default)");
  remote->excludes(local);
  decrypt->add_flag("--allow-unsalted-remote", dec.allow_unsalted,
                    "Outsource an unsalted puzzle (the server learns the key)");
  decrypt->add_option("--passphrase-env", dec.passphrase_env,
                      "Environment variable holding the passphrase of a layered container");

  DecryptArgs srm;
  auto* solve_remote_cmd =
      app.add_subcommand("solve-remote", "Decrypt a container using a solver service");
  solve_remote_cmd->add_option("input", srm.input, "Container file")->required();
  solve_remote_cmd->add_option("--remote", srm.remote, "Solver service URL")->required();
  solve_remote_cmd->add_option("-o,--output", srm.output, "Plaintext path");
  solve_remote_cmd->add_flag("--allow-unsalted-remote", srm.allow_unsalted,
                             "Outsource an unsalted puzzle (the server learns the key)");
  solve_remote_cmd->add_option("--passphrase-env", srm.passphrase_env,
                               "Environment variable holding the passphrase");

  DegradeArgs deg;
  auto* degrade = app.add_subcommand("degrade", "Raise the difficulty of containers in place");
  degrade->add_option("path", deg.path, "Container file or directory")->required();
  degrade->add_option("-d,--difficulty", deg.difficulty, "Target difficulty")->required();
  degrade->add_option("--older-than", deg.older_than_days,
                      "Directory mode: only files last modified at least DAYS ago")
      ->check(CLI::NonNegativeNumber);
  degrade->add_option("--workers", deg.workers, "Files processed in parallel")
      ->check(CLI::PositiveNumber);
  degrade->add_flag("--force-high-difficulty", deg.force_high, "Allow difficulty above 64");

  InspectArgs ins;
  auto* inspect_cmd = app.add_subcommand("inspect", "Show a container's header and solve cost");
  inspect_cmd->add_option("input", ins.input, "Container file")->required();
  inspect_cmd->add_flag("--calibrate", ins.calibrate,
                        "Time one KDF call here instead of using nominal costs");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time wrap and solve, write CSV");
  add_suite_option(bench_cmd, bench.suite);
  bench_cmd->add_option("-d,--difficulty", bench.difficulties, "Difficulties, e.g. 4,8,12")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per difficulty")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--warmup", bench.warmup, "Discarded runs per difficulty");
  bench_cmd->add_option("--workers", bench.workers, "Solver threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Fixed randomness for reproducible counts");
  bench_cmd->add_option("-o,--output", bench.output, "CSV path (default: standard output)");

  ServeArgs srv;
  auto* serve = app.add_subcommand("serve", "Run the puzzle solver service");
  serve->add_option("--host", srv.host, "Bind address");
  serve->add_option("--port", srv.port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--cap", srv.cap,
                    std::string("Largest difficulty solved (") + kSolverCapEnv + " overrides)");
  serve->add_option("--workers", srv.workers, "Solver threads (default: all cores)");
  serve->add_option("--max-concurrent", srv.max_concurrent, "Requests handled at once")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (encrypt->parsed()) return cmd_encrypt(enc, out);
    if (decrypt->parsed()) return cmd_decrypt(dec, out, err);
    if (solve_remote_cmd->parsed()) return cmd_decrypt(srm, out, err);
    if (degrade->parsed()) return cmd_degrade(deg, out, err);
    if (inspect_cmd->parsed()) return cmd_inspect(ins, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
    if (serve->parsed()) return cmd_serve(srv, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolveFailure& e) {
    err << "error: " << e.what() << " (" << e.report().candidates_tried << " candidates)\n";
    return exit_code_for(e.code());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace archivesafe::cli
