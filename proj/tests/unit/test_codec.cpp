#include <doctest.h>

#include "isaid/codec.hpp"
#include "isaid/error.hpp"
#include "isaid/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

using namespace isaid;
using codec::Kind;

namespace {

const std::vector<std::uint8_t> kSample{0xd7, 0x43, 0xd4, 0x44, 0xd6, 0x44, 0xd8, 0x45};

std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("codec encodes the reference payload in all four bases") {
  CHECK(codec::encode(Kind::base16, kSample) == "D743D444D644D845");
  CHECK(codec::encode(Kind::base32, kSample) == "25B5IRGWITMEK===");
  CHECK(codec::encode(Kind::base64, kSample) == "10PURNZE2EU=");
  CHECK(codec::encode(Kind::base85, kSample) == "f0e%UejS.Z");
}

TEST_CASE("codec RFC 4648 test vectors") {
  const char* inputs[] = {"", "f", "fo", "foo", "foob", "fooba", "foobar"};
  const char* b32[] = {"", "MY======", "MZXQ====", "MZXW6===", "MZXW6YQ=", "MZXW6YTB", "MZXW6YTBOI======"};
  const char* b64[] = {"", "Zg==", "Zm8=", "Zm9v", "Zm9vYg==", "Zm9vYmE=", "Zm9vYmFy"};
  const char* b16[] = {"", "66", "666F", "666F6F", "666F6F62", "666F6F6261", "666F6F626172"};
  for (int i = 0; i < 7; ++i) {
    const auto in = bytes(inputs[i]);
    CHECK(codec::encode(Kind::base32, in) == b32[i]);
    CHECK(codec::encode(Kind::base64, in) == b64[i]);
    CHECK(codec::encode(Kind::base16, in) == b16[i]);
    CHECK(codec::decode(Kind::base32, b32[i]) == in);
    CHECK(codec::decode(Kind::base64, b64[i]) == in);
  }
}

TEST_CASE("codec base85 partial groups and the zero group") {
  CHECK(codec::encode(Kind::base85, bytes("")) == "");
  CHECK(codec::encode(Kind::base85, std::vector<std::uint8_t>{0, 0, 0, 0}) == "!!!!!");
  CHECK(codec::encode(Kind::base85, std::vector<std::uint8_t>{0xff, 0xff, 0xff, 0xff}) == "s8W-!");
  CHECK(codec::encode(Kind::base85, bytes("a")).size() == 2);
  CHECK(codec::encode(Kind::base85, bytes("abc")).size() == 4);
  CHECK(codec::encode(Kind::base85, bytes("Man ")) == "9jqo^");
}

TEST_CASE("codec round-trips 10000 seeded payloads per base") {
  SplitMix64 rng(2024);
  for (Kind kind : {Kind::base16, Kind::base32, Kind::base64, Kind::base85}) {
    for (int t = 0; t < 10000; ++t) {
      std::vector<std::uint8_t> payload(rng.below(70));
      for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
      const auto text = codec::encode(kind, payload);
      REQUIRE(text.size() == codec::encoded_length(kind, payload.size()));
      REQUIRE(codec::decode(kind, text) == payload);
    }
  }
}

TEST_CASE("codec decode rejects malformed input") {
  CHECK_THROWS_AS(codec::decode(Kind::base32, "A==="), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base32, "MY====="), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base64, "Zg="), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base64, "Z==="), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base64, "Zm9v!A=="), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base16, "ABC"), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base16, "GG"), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base85, "s8W-\""), DecodeError);  // exceeds 2^32 - 1
  CHECK_THROWS_AS(codec::decode(Kind::base85, "z"), DecodeError);
  CHECK_THROWS_AS(codec::decode(Kind::base85, "9"), DecodeError);
}

TEST_CASE("codec base16 decode is case-insensitive") {
  CHECK(codec::decode(Kind::base16, "d743D444d644d845") == kSample);
}

TEST_CASE("codec padding strip and kind parsing") {
  CHECK(codec::strip_padding(Kind::base32, "25B5IRGWITMEK===") == "25B5IRGWITMEK");
  CHECK(codec::strip_padding(Kind::base64, "10PURNZE2EU=") == "10PURNZE2EU");
  CHECK(codec::strip_padding(Kind::base85, "f0e%UejS.Z") == "f0e%UejS.Z");
  CHECK(codec::parse_kind("85") == Kind::base85);
  CHECK(codec::parse_kind("base32") == Kind::base32);
  CHECK_FALSE(codec::parse_kind("base7").has_value());
  CHECK(codec::encoding(Kind::base85).alphabet_size() == 85);
  CHECK(codec::encoding(Kind::base64).index_of('/') == 63);
  CHECK_FALSE(codec::encoding(Kind::base16).index_of('=').has_value());
}
