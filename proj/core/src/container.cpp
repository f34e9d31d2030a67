#include "archivesafe/container.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "archivesafe/error.hpp"

namespace archivesafe {
namespace {

using namespace container_flags;

// magic + version + suite + flags + lambda + partial_bits
constexpr std::size_t kFixedPrefix = 4 + 1 + 1 + 1 + 2 + 2;

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  ByteView take(std::size_t n) {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::TruncatedInput, "container truncated in header");
    }
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return take(1)[0]; }
  std::uint64_t be(std::size_t n) {
    std::uint64_t v = 0;
    for (std::uint8_t b : take(n)) v = (v << 8) | b;
    return v;
  }
  template <typename Tag>
  Block128<Tag> block() {
    return *block_from_bytes<Tag>(take(kLambdaBytes));
  }
  std::size_t position() const { return pos_; }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

class Writer {
 public:
  void put(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void be(std::uint64_t v, std::size_t n) {
    for (std::size_t i = n; i-- > 0;) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes& bytes() { return out_; }

 private:
  Bytes out_;
};

struct Prefix {
  KdfSuiteId suite;
  std::uint8_t flags;
  std::uint16_t partial_bits;
};

Prefix read_prefix(Reader& r) {
  const ByteView magic = r.take(kContainerMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kContainerMagic.begin())) {
    throw Error(ErrorCode::BadMagic, "not an archivesafe container");
  }
  const std::uint8_t version = r.u8();
  if (version != kContainerVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                "unsupported container version " + std::to_string(version));
  }
  Prefix p{parse_suite(r.u8()), r.u8(), 0};
  if (p.flags & ~kKnown) {
    throw Error(ErrorCode::MalformedFlags, "reserved flag bits set");
  }
  if (r.be(2) != kLambdaBits) {
    throw Error(ErrorCode::MalformedLengths, "unsupported lambda");
  }
  p.partial_bits = static_cast<std::uint16_t>(r.be(2));
  if (p.partial_bits > kLambdaBits) {
    throw Error(ErrorCode::MalformedLengths, "partial seed longer than lambda");
  }
  return p;
}

void write_header(Writer& w, const ContainerHeader& h) {
  w.put(kContainerMagic);
  w.u8(h.version);
  w.u8(static_cast<std::uint8_t>(h.suite));
  w.u8(h.flags);
  w.be(h.lambda_bits, 2);
  w.be(h.partial.bit_length(), 2);
  w.put(h.checksum.view());
  if (h.flags & kSalted) w.put(h.salt->view());
  w.put(h.partial.packed());
  w.put(h.iv.view());
  w.be(h.body_len, 8);
  if (h.flags & kBodyChecksum) w.put(h.body_checksum->view());
}

Digest body_digest(KdfSuiteId suite, ByteView body) {
  return kdf_hash(suite, KdfDomain::BodyChecksum, body);
}

}  // namespace

std::size_t header_size(unsigned difficulty, bool salted, bool body_checksum) noexcept {
  const std::size_t partial_bits = kLambdaBits - std::min<std::size_t>(difficulty, kLambdaBits);
  return kFixedPrefix + kLambdaBytes + (salted ? kLambdaBytes : 0) + (partial_bits + 7) / 8 +
         kBlockBytes + 8 + (body_checksum ? kLambdaBytes : 0);
}

std::size_t container_size(unsigned difficulty, bool salted, bool body_checksum,
                           std::size_t plaintext_len) noexcept {
  return header_size(difficulty, salted, body_checksum) + padded_length(plaintext_len);
}

Bytes serialize(const DbkeCiphertext& ct, const SerializeOptions& options) {
  const WrappedKey& w = ct.wrapped;
  if (w.salted && !w.salt) {
    throw Error(ErrorCode::SaltRequired, "cannot serialize a salted key without its salt");
  }
  ContainerHeader h;
  h.suite = w.suite;
  h.flags = static_cast<std::uint8_t>((w.salted ? kSalted : 0) | (ct.layered ? kLayered : 0) |
                                      (options.body_checksum ? kBodyChecksum : 0));
  h.checksum = w.checksum;
  h.salt = w.salt;
  h.partial = w.partial;
  h.iv = ct.cipher.iv;
  h.body_len = ct.cipher.body.size();
  if (options.body_checksum) h.body_checksum = body_digest(w.suite, ct.cipher.body);

  Writer out;
  out.bytes().reserve(header_size(w.difficulty(), w.salted, options.body_checksum) +
                      ct.cipher.body.size());
  write_header(out, h);
  out.put(ct.cipher.body);
  return std::move(out.bytes());
}

ContainerHeader parse_header(ByteView bytes, std::optional<std::uint64_t> total_size) {
  Reader r(bytes);
  const Prefix p = read_prefix(r);

  ContainerHeader h;
  h.suite = p.suite;
  h.flags = p.flags;
  h.checksum = r.block<DigestTag>();
  if (p.flags & kSalted) h.salt = r.block<SaltTag>();
  const ByteView packed = r.take((p.partial_bits + 7u) / 8u);
  auto partial = PartialSeed::from_packed(p.partial_bits, packed);
  if (!partial) {
    throw Error(ErrorCode::MalformedLengths, "non-zero padding bits in partial seed");
  }
  h.partial = std::move(*partial);
  h.iv = r.block<IvTag>();
  h.body_len = r.be(8);
  if (p.flags & kBodyChecksum) h.body_checksum = r.block<DigestTag>();
  h.size = r.position();

  if (h.body_len == 0 || h.body_len % kBlockBytes != 0) {
    throw Error(ErrorCode::MalformedLengths, "body length is not a positive multiple of 16");
  }
  if (total_size) {
    if (*total_size < h.size) {
      throw Error(ErrorCode::TruncatedInput, "container truncated in header");
    }
    const std::uint64_t available = *total_size - h.size;
    if (h.body_len > available) {
      throw Error(ErrorCode::TruncatedInput, "container body truncated");
    }
    if (h.body_len < available) {
      throw Error(ErrorCode::MalformedLengths, "trailing bytes after container body");
    }
  }
  return h;
}

ParsedContainer parse(ByteView bytes, const ParseOptions& options) {
  ParsedContainer out;
  out.header = parse_header(bytes, bytes.size());
  const ContainerHeader& h = out.header;
  const ByteView body = bytes.subspan(h.size);
  if (options.verify_body_checksum && h.body_checksum &&
      body_digest(h.suite, body) != *h.body_checksum) {
    throw Error(ErrorCode::ChecksumMismatch, "body checksum mismatch");
  }

  DbkeCiphertext& ct = out.ciphertext;
  ct.wrapped.suite = h.suite;
  ct.wrapped.checksum = h.checksum;
  ct.wrapped.partial = h.partial;
  ct.wrapped.salted = h.salted();
  ct.wrapped.salt = h.salt;
  ct.cipher.iv = h.iv;
  ct.cipher.body.assign(body.begin(), body.end());
  ct.layered = h.layered();
  return out;
}

Bytes degrade_file(ByteView bytes, unsigned target_difficulty, bool allow_high_difficulty) {
  ContainerHeader h = parse_header(bytes, bytes.size());
  const unsigned current = h.difficulty();
  if (target_difficulty < current) {
    throw Error(ErrorCode::CannotReduceDifficulty,
                "cannot lower difficulty from " + std::to_string(current) + " to " +
                    std::to_string(target_difficulty));
  }
  if (target_difficulty == current) return Bytes(bytes.begin(), bytes.end());
  check_difficulty(target_difficulty, allow_high_difficulty);
  h.partial = h.partial.drop_leading(target_difficulty - current);

  Writer out;
  out.bytes().reserve(bytes.size());
  write_header(out, h);
  out.put(bytes.subspan(h.size));
  return std::move(out.bytes());
}

std::chrono::duration<double> nominal_kdf_time(KdfSuiteId suite) noexcept {
  using std::chrono::duration;
  return suite == KdfSuiteId::Argon2id ? duration<double>(0.25) : duration<double>(1e-6);
}

namespace {

ContainerInfo make_info(ContainerHeader header,
                        std::optional<std::chrono::duration<double>> kdf_time) {
  ContainerInfo info;
  const unsigned d = header.difficulty();
  info.expected_candidates = d == 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(d) - 1);
  info.estimated_solve = estimate_cost(d, kdf_time.value_or(nominal_kdf_time(header.suite)));
  info.header = std::move(header);
  return info;
}

}  // namespace

ContainerInfo inspect(std::istream& in, std::uint64_t total_size,
                      std::optional<std::chrono::duration<double>> kdf_time) {
  Bytes head(kFixedPrefix);
  in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  Reader r(head);
  const Prefix p = read_prefix(r);

  const std::size_t needed =
      header_size(static_cast<unsigned>(kLambdaBits - p.partial_bits), p.flags & kSalted,
                  p.flags & kBodyChecksum);
  head.resize(needed);
  in.read(reinterpret_cast<char*>(head.data() + kFixedPrefix),
          static_cast<std::streamsize>(needed - kFixedPrefix));
  head.resize(kFixedPrefix + static_cast<std::size_t>(in.gcount()));
  return make_info(parse_header(head, total_size), kdf_time);
}

ContainerInfo inspect(ByteView bytes, std::optional<std::chrono::duration<double>> kdf_time) {
  return make_info(parse_header(bytes, bytes.size()), kdf_time);
}

std::string format_info(const ContainerInfo& info) {
  const ContainerHeader& h = info.header;
  auto yes_no = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream out;
  out << "format:              ASAF v" << static_cast<int>(h.version) << "\n"
      << "suite:               " << static_cast<int>(h.suite) << " (" << suite_name(h.suite)
      << ")\n"
      << "lambda:              " << h.lambda_bits << "\n"
      << "difficulty:          " << h.difficulty() << "\n"
      << "salted:              " << yes_no(h.salted()) << "\n"
      << "outsourceable:       " << yes_no(h.salted()) << "\n"
      << "layered:             " << yes_no(h.layered()) << "\n"
      << "body checksum:       " << yes_no(h.body_checksum.has_value()) << "\n"
      << "body length:         " << h.body_len << "\n"
      << "expected candidates: " << info.expected_candidates << "\n"
      << "estimated solve:     " << info.estimated_solve.count() << " s (single worker)\n";
  return out.str();
}

}  // namespace archivesafe
