#include "archivesafe/solver_service.hpp"

#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "archivesafe/error.hpp"

namespace archivesafe {
namespace {

using nlohmann::json;

HttpReply error_reply(int status, std::string_view code, const std::string& message) {
  json body = {{"error", {{"code", code}, {"message", message}}}};
  return {status, body.dump()};
}

struct BadRequest {
  std::string message;
};

// Strict decoding: every field present with the right type, nothing else.
struct DecodedRequest {
  PublicPuzzle puzzle;
  unsigned max_difficulty;
};

DecodedRequest decode_request(std::string_view text) {
  static const std::set<std::string> kFields = {"suite", "h", "partial_seed", "partial_bits",
                                                "max_difficulty"};
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw BadRequest{"body is not a JSON object"};
  for (const auto& [key, value] : doc.items()) {
    if (!kFields.contains(key)) throw BadRequest{"unexpected field \"" + key + "\""};
  }
  for (const auto& key : kFields) {
    if (!doc.contains(key)) throw BadRequest{"missing field \"" + key + "\""};
  }
  auto uint_field = [&](const char* key, std::uint64_t max) {
    const json& v = doc.at(key);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > max) {
      throw BadRequest{std::string("field \"") + key + "\" must be an integer in [0, " +
                       std::to_string(max) + "]"};
    }
    return v.get<std::uint64_t>();
  };
  auto hex_field = [&](const char* key) {
    const json& v = doc.at(key);
    if (!v.is_string()) throw BadRequest{std::string("field \"") + key + "\" must be a string"};
    auto bytes = from_hex(v.get<std::string>());
    if (!bytes) throw BadRequest{std::string("field \"") + key + "\" is not lowercase hex"};
    return *bytes;
  };

  const auto suite = suite_from_byte(static_cast<std::uint8_t>(uint_field("suite", 255)));
  if (!suite) throw BadRequest{"unknown suite"};
  const auto partial_bits = static_cast<unsigned>(uint_field("partial_bits", kLambdaBits));
  const auto max_difficulty = static_cast<unsigned>(uint_field("max_difficulty", kLambdaBits));
  const Bytes h = hex_field("h");
  const Bytes partial = hex_field("partial_seed");

  auto checksum = block_from_bytes<DigestTag>(h);
  if (!checksum) throw BadRequest{"\"h\" must encode exactly 16 bytes"};
  auto seed = PartialSeed::from_packed(partial_bits, partial);
  if (!seed) throw BadRequest{"\"partial_seed\" does not match \"partial_bits\""};
  return {{*suite, *checksum, std::move(*seed)}, max_difficulty};
}

std::string raw_request(const httplib::Request& req) {
  std::ostringstream out;
  out << req.method << ' ' << req.path << " HTTP/1.1\r\n";
  for (const auto& [k, v] : req.headers) out << k << ": " << v << "\r\n";
  out << "\r\n" << req.body;
  return out.str();
}

void apply(const HttpReply& reply, httplib::Response& res) {
  res.status = reply.status;
  res.set_content(reply.body, "application/json");
}

}  // namespace

unsigned resolve_solver_cap(unsigned configured) {
  unsigned cap = configured;
  if (const char* env = std::getenv(kSolverCapEnv); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v > kLambdaBits) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(kSolverCapEnv) + " is not a valid difficulty: " + env);
    }
    cap = static_cast<unsigned>(v);
  }
  if (cap > kDefaultMaxDifficulty) {
    throw Error(ErrorCode::InvalidArgument,
                "solver cap " + std::to_string(cap) + " exceeds the maximum difficulty " +
                    std::to_string(kDefaultMaxDifficulty));
  }
  return cap;
}

std::string encode_solve_request(const PublicPuzzle& puzzle, unsigned max_difficulty) {
  json body = {{"suite", static_cast<unsigned>(puzzle.suite)},
               {"h", to_hex(puzzle.checksum)},
               {"partial_seed", to_hex(puzzle.partial.packed())},
               {"partial_bits", puzzle.partial.bit_length()},
               {"max_difficulty", max_difficulty}};
  return body.dump();
}

SolveEndpoint::SolveEndpoint(ServiceConfig config)
    : config_(std::move(config)),
      total_workers_(config_.workers ? config_.workers : default_workers()) {
  if (config_.cap > kDefaultMaxDifficulty) {
    throw Error(ErrorCode::InvalidArgument, "solver cap exceeds the maximum difficulty");
  }
}

HttpReply SolveEndpoint::solve(std::string_view body) {
  ++requests_;
  DecodedRequest request;
  try {
    request = decode_request(body);
  } catch (const BadRequest& e) {
    return error_reply(400, "MalformedRequest", e.message);
  }

  const unsigned d = request.puzzle.difficulty();
  const unsigned limit = std::min(config_.cap, request.max_difficulty);
  if (d > limit) {
    ++rejected_;
    return error_reply(403, "DifficultyTooHigh",
                       "difficulty " + std::to_string(d) + " exceeds the limit of " +
                           std::to_string(limit));
  }

  const unsigned active = ++active_;
  const unsigned budget = std::max(1u, total_workers_ / active);
  ++invocations_;
  SolveControl control;
  control.deadline = std::chrono::steady_clock::now() + config_.deadline;
  HttpReply reply;
  try {
    const SolveReport report = archivesafe::solve(SearchSpec{request.puzzle, {budget, 0}}, control);
    unsigned seen = max_solved_.load();
    while (d > seen && !max_solved_.compare_exchange_weak(seen, d)) {
    }
    json out = {
        {"seed", to_hex(*report.seed)},
        {"candidates_tried", report.candidates_tried},
        {"elapsed_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(report.elapsed).count()}};
    reply = {200, out.dump()};
  } catch (const SolveFailure& e) {
    if (e.code() == ErrorCode::SolveTimeout || e.code() == ErrorCode::Cancelled) {
      reply = error_reply(504, "SolveTimeout", e.what());
    } else {
      reply = error_reply(422, "NoSolution", e.what());
    }
  } catch (const std::exception& e) {
    reply = error_reply(500, "Internal", e.what());
  }
  --active_;
  return reply;
}

HttpReply SolveEndpoint::health() const {
  json out = {{"status", "ok"}, {"cap", config_.cap}, {"workers", total_workers_}};
  return {200, out.dump()};
}

ServiceStats SolveEndpoint::stats() const {
  return {requests_.load(), invocations_.load(), rejected_.load(), max_solved_.load()};
}

struct SolverService::Impl {
  explicit Impl(ServiceConfig config) : endpoint(std::move(config)) {
    const ServiceConfig& cfg = endpoint.config();
    const unsigned threads = std::max(1u, cfg.max_concurrent);
    server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
    server.set_payload_max_length(64 * 1024);
    server.Post("/v1/solve", [this](const httplib::Request& req, httplib::Response& res) {
      observe(req);
      apply(endpoint.solve(req.body), res);
    });
    server.Get("/v1/health", [this](const httplib::Request& req, httplib::Response& res) {
      observe(req);
      apply(endpoint.health(), res);
    });
  }

  // Runs before the reply is sent, so a capture exists by the time the client returns.
  void observe(const httplib::Request& req) const {
    if (endpoint.config().request_observer) endpoint.config().request_observer(raw_request(req));
  }

  int bind() {
    const ServiceConfig& cfg = endpoint.config();
    if (cfg.port == 0) {
      port = server.bind_to_any_port(cfg.host);
    } else {
      port = server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
    }
    if (port < 0) {
      throw Error(ErrorCode::Io, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
    }
    return port;
  }

  SolveEndpoint endpoint;
  httplib::Server server;
  std::thread thread;
  int port = -1;
};

SolverService::SolverService(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

SolverService::~SolverService() { stop(); }

int SolverService::start() {
  const int port = impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void SolverService::run() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void SolverService::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int SolverService::port() const noexcept { return impl_->port; }

SolveEndpoint& SolverService::endpoint() noexcept { return impl_->endpoint; }

RemoteSolveResult solve_remote(const std::string& endpoint, const WrappedKey& wrapped,
                               const RemoteSolveOptions& options) {
  if (!wrapped.salted && !options.allow_unsalted) {
    throw Error(ErrorCode::SaltRequired,
                "refusing to outsource an unsalted wrap: the server would learn the key");
  }
  if (wrapped.salted && !wrapped.salt) {
    throw Error(ErrorCode::SaltRequired, "salt is needed locally to derive the key");
  }

  httplib::Client client(endpoint);
  const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(options.timeout).count();
  client.set_read_timeout(static_cast<time_t>(timeout), 0);
  client.set_write_timeout(30, 0);
  const std::string body = encode_solve_request(wrapped.public_view(), options.max_difficulty);
  auto res = client.Post("/v1/solve", body, "application/json");
  if (!res) {
    throw Error(ErrorCode::Transport,
                "request to " + endpoint + " failed: " + httplib::to_string(res.error()));
  }

  const json doc = json::parse(res->body, nullptr, false);
  if (res->status != 200) {
    std::string message = "server returned HTTP " + std::to_string(res->status);
    if (!doc.is_discarded() && doc.contains("error") && doc["error"].is_object()) {
      message += ": " + doc["error"].value("message", std::string());
    }
    switch (res->status) {
      case 400: throw Error(ErrorCode::MalformedRequest, message);
      case 403: throw Error(ErrorCode::DifficultyTooHigh, message);
      case 422: throw Error(ErrorCode::ExhaustedNoSolution, message);
      case 504: throw Error(ErrorCode::SolveTimeout, message);
      default: throw Error(ErrorCode::Transport, message);
    }
  }

  if (doc.is_discarded() || !doc.is_object() || !doc.contains("seed") ||
      !doc["seed"].is_string()) {
    throw Error(ErrorCode::ServerReturnedInvalidSeed, "response carries no seed");
  }
  const auto raw = from_hex(doc["seed"].get<std::string>());
  const auto seed = raw ? block_from_bytes<SeedTag>(*raw) : std::nullopt;
  if (!seed || h1(wrapped.suite, seed->view()) != wrapped.checksum) {
    throw Error(ErrorCode::ServerReturnedInvalidSeed, "returned seed does not match the checksum");
  }

  RemoteSolveResult out;
  out.key = derive_key(wrapped.suite, *seed, wrapped.salt);
  out.candidates_tried = doc.value("candidates_tried", std::uint64_t{0});
  out.elapsed_ms = doc.value("elapsed_ms", std::uint64_t{0});
  return out;
}

}  // namespace archivesafe
