// SPDX-License-Identifier: Apache-2.0
#include "figr/util/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "figr/util/error.hpp"

namespace figr {
namespace {

std::string to_hex(const unsigned char* digest, unsigned len) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(len * 2, '0');
  for (unsigned i = 0; i < len; ++i) {
    out[2 * i] = kHex[digest[i] >> 4];
    out[2 * i + 1] = kHex[digest[i] & 0xF];
  }
  return out;
}

std::string digest_hex(const EVP_MD* md, std::span<const std::string_view> parts) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1)
    throw Error(Errc::Io, "digest initialisation failed");
  for (auto part : parts)
    if (EVP_DigestUpdate(ctx.get(), part.data(), part.size()) != 1)
      throw Error(Errc::Io, "digest update failed");
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw Error(Errc::Io, "digest finalisation failed");
  return to_hex(digest.data(), len);
}

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  const std::string_view view(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  return digest_hex(EVP_sha256(), std::span(&view, 1));
}

std::string sha256_hex(std::string_view text) { return digest_hex(EVP_sha256(), std::span(&text, 1)); }

std::string git_blob_sha1_hex(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size());
  const std::array<std::string_view, 2> parts{std::string_view(header.c_str(), header.size() + 1), content};
  return digest_hex(EVP_sha1(), parts);
}

}  // namespace figr
