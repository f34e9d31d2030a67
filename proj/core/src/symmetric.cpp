#include "archivesafe/symmetric.hpp"

#include <climits>
#include <memory>

#include <openssl/evp.h>

#include "archivesafe/error.hpp"

namespace archivesafe {
namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

CipherCtx make_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::bad_alloc();
  return ctx;
}

// EVP_*Update takes int lengths; feed large inputs in slices.
constexpr std::size_t kSlice = std::size_t{1} << 28;

}  // namespace

SymCiphertext sym_encrypt_with_iv(const SymmetricKey& key, const Iv& iv, ByteView plaintext) {
  if (plaintext.size() > kMaxPlaintextBytes) {
    throw Error(ErrorCode::MessageTooLarge, "plaintext exceeds the 1 GiB limit");
  }
  SymCiphertext out{iv, Bytes(padded_length(plaintext.size()) + kBlockBytes)};
  auto ctx = make_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.bytes.data(),
                         iv.bytes.data()) != 1) {
    throw Error(ErrorCode::InvalidArgument, "AES-128-CBC initialization failed");
  }
  std::size_t written = 0;
  for (std::size_t off = 0; off < plaintext.size(); off += kSlice) {
    const std::size_t n = std::min(kSlice, plaintext.size() - off);
    int len = 0;
    EVP_EncryptUpdate(ctx.get(), out.body.data() + written, &len, plaintext.data() + off,
                      static_cast<int>(n));
    written += static_cast<std::size_t>(len);
  }
  int len = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.body.data() + written, &len) != 1) {
    throw Error(ErrorCode::InvalidArgument, "AES-128-CBC finalization failed");
  }
  written += static_cast<std::size_t>(len);
  out.body.resize(written);
  return out;
}

SymCiphertext sym_encrypt(const SymmetricKey& key, ByteView plaintext, RandomSource& rng) {
  if (plaintext.size() > kMaxPlaintextBytes) {
    throw Error(ErrorCode::MessageTooLarge, "plaintext exceeds the 1 GiB limit");
  }
  const Iv iv = rng.draw<IvTag>();
  return sym_encrypt_with_iv(key, iv, plaintext);
}

Bytes sym_decrypt(const SymmetricKey& key, const SymCiphertext& ct) {
  if (ct.body.empty() || ct.body.size() % kBlockBytes != 0) {
    throw Error(ErrorCode::PaddingInvalid, "ciphertext body is not a positive multiple of 16");
  }
  Bytes out(ct.body.size() + kBlockBytes);
  auto ctx = make_ctx();
  EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_cbc(), nullptr, key.bytes.data(), ct.iv.bytes.data());
  std::size_t written = 0;
  for (std::size_t off = 0; off < ct.body.size(); off += kSlice) {
    const std::size_t n = std::min(kSlice, ct.body.size() - off);
    int len = 0;
    EVP_DecryptUpdate(ctx.get(), out.data() + written, &len, ct.body.data() + off,
                      static_cast<int>(n));
    written += static_cast<std::size_t>(len);
  }
  int len = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + written, &len) != 1) {
    throw Error(ErrorCode::PaddingInvalid, "invalid padding (corrupted data or wrong key)");
  }
  written += static_cast<std::size_t>(len);
  out.resize(written);
  return out;
}

}  // namespace archivesafe
