#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "archivesafe/keyless_wrap.hpp"

namespace archivesafe {

// Wire protocol (JSON over HTTP, lowercase hex without 0x):
//
//   POST /v1/solve
//     {"suite":2,"h":"<32 hex>","partial_seed":"<hex>","partial_bits":120,
//      "max_difficulty":64}
//   200 {"seed":"<32 hex>","candidates_tried":N,"elapsed_ms":N}
//   4xx/5xx {"error":{"code":"...","message":"..."}}
//
//   GET /v1/health -> {"status":"ok","cap":N,"workers":N}
//
// The request schema is strict: unknown fields (a "salt" in particular) are
// rejected with 400.

inline constexpr const char* kSolverCapEnv = "ARCHIVESAFE_SOLVER_CAP";

/// ARCHIVESAFE_SOLVER_CAP, when set, replaces the configured cap.
/// Throws Error(InvalidArgument) for a malformed value or one above kDefaultMaxDifficulty.
unsigned resolve_solver_cap(unsigned configured);

std::string encode_solve_request(const PublicPuzzle& puzzle, unsigned max_difficulty);

struct HttpReply {
  int status = 200;
  std::string body;
};

struct ServiceStats {
  std::uint64_t requests = 0;
  std::uint64_t solver_invocations = 0;
  std::uint64_t rejected_over_cap = 0;
  unsigned max_difficulty_solved = 0;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0: any free port
  unsigned cap = 32;
  unsigned workers = 0;  // 0: hardware concurrency
  unsigned max_concurrent = 4;
  std::chrono::milliseconds deadline{std::chrono::minutes(10)};
  /// Receives each raw request (request line, headers, body) before it is answered.
  std::function<void(const std::string&)> request_observer;
};

/// Transport-independent request handling for POST /v1/solve.
class SolveEndpoint {
 public:
  explicit SolveEndpoint(ServiceConfig config);

  HttpReply solve(std::string_view body);
  HttpReply health() const;
  ServiceStats stats() const;
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  ServiceConfig config_;
  unsigned total_workers_;
  std::atomic<unsigned> active_{0};
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> invocations_{0};
  std::atomic<std::uint64_t> rejected_{0};
  std::atomic<unsigned> max_solved_{0};
};

/// HTTP front end for SolveEndpoint.
class SolverService {
 public:
  explicit SolverService(ServiceConfig config);
  ~SolverService();
  SolverService(const SolverService&) = delete;
  SolverService& operator=(const SolverService&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const noexcept;
  SolveEndpoint& endpoint() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RemoteSolveOptions {
  /// Outsourcing an unsalted wrap hands the server the key; refused unless set.
  bool allow_unsalted = false;
  unsigned max_difficulty = kDefaultMaxDifficulty;
  std::chrono::seconds timeout{std::chrono::minutes(30)};
};

struct RemoteSolveResult {
  SymmetricKey key;
  std::uint64_t candidates_tried = 0;
  std::uint64_t elapsed_ms = 0;
};

/// Sends only the public view of `wrapped` to endpoint (e.g.
/// "http://127.0.0.1:8080"), checks the returned seed against the checksum and
/// derives the key locally with the held salt.
RemoteSolveResult solve_remote(const std::string& endpoint, const WrappedKey& wrapped,
                               const RemoteSolveOptions& options = {});

}  // namespace archivesafe
