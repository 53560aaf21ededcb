// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <vector>

#include "figr/util/base64.hpp"
#include "figr/util/error.hpp"
#include "figr/util/hash.hpp"
#include "figr/util/parallel.hpp"
#include "figr/util/rng.hpp"
#include "figr/util/text.hpp"

TEST_CASE("sha256 and git blob hashes match published vectors") {
  CHECK(figr::sha256_hex(std::string_view("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(figr::git_blob_sha1_hex("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(figr::git_blob_sha1_hex("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(figr::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(figr::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("base64 round trip and strict decoding") {
  CHECK(figr::base64_encode(std::string_view("foobar")) == "Zm9vYmFy");
  CHECK(figr::base64_encode(std::string_view("fo")) == "Zm8=");
  figr::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(rng.uniform_int(0, 50)));
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    const auto back = figr::base64_decode(figr::base64_encode(bytes));
    REQUIRE(back);
    CHECK(*back == bytes);
  }
  CHECK_FALSE(figr::base64_decode("Zm9"));
  CHECK_FALSE(figr::base64_decode("Zm9v!mFy"));
}

TEST_CASE("text helpers") {
  CHECK(figr::count_tokens("  a bb\tc\n\nd ") == 4);
  CHECK(figr::count_tokens("") == 0);
  CHECK(figr::count_nonempty_lines("a\n\n  \nb\n") == 2);
  CHECK(figr::format_number(3.0) == "3");
  CHECK(figr::format_number(-0.0) == "0");
  CHECK(figr::format_number(0.1) == "0.1");
  CHECK(figr::format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(figr::trim("  x y \n") == "x y");
}

TEST_CASE("rng streams are reproducible and derived seeds differ") {
  figr::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 50; ++i)
    for (std::uint64_t j = 0; j < 50; ++j) seeds.insert(figr::derive_seed(1, i, j));
  CHECK(seeds.size() == 2500);
  figr::Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = c.uniform_int(-3, 3);
    CHECK((v >= -3 && v <= 3));
    const double u = c.uniform01();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("parallel_for visits every index once and rethrows the first failure") {
  std::vector<int> hits(1000, 0);
  figr::parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_WITH(figr::parallel_for(10, 3,
                                       [](std::size_t i) {
                                         if (i == 7 || i == 4) throw std::runtime_error(std::to_string(i));
                                       }),
                    "4");
}

TEST_CASE("error carries a code") {
  const figr::Error e(figr::Errc::EmptyList, "no samples");
  CHECK(e.code() == figr::Errc::EmptyList);
  CHECK(std::string(e.what()).find("no samples") != std::string::npos);
}
