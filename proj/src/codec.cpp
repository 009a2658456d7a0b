#include "isaid/codec.hpp"

#include "isaid/error.hpp"

#include <array>
#include <string>

namespace isaid::codec {
namespace {

constexpr std::string_view kBase16 = "0123456789ABCDEF";
constexpr std::string_view kBase32 = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
constexpr std::string_view kBase64 =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
// Ascii85: '!' (33) through 'u' (117).
constexpr std::string_view kBase85 =
    "!\"#$%&'()*+,-./0123456789:;<=>?@ABCDEFGHIJKLMNOPQRSTUVWXYZ[\\]^_`abcdefghijklmnopqrstu";

constexpr std::array<Encoding, 4> kEncodings{{
    {Kind::base16, kBase16, 1, 2, false},
    {Kind::base32, kBase32, 5, 8, true},
    {Kind::base64, kBase64, 3, 4, true},
    {Kind::base85, kBase85, 4, 5, false},
}};

std::string encode16(std::span<const std::uint8_t> in) {
  std::string out;
  out.reserve(in.size() * 2);
  for (std::uint8_t b : in) {
    out.push_back(kBase16[b >> 4]);
    out.push_back(kBase16[b & 0x0f]);
  }
  return out;
}

// Shared bit-packing encoder for base32 (5 bits/char) and base64 (6 bits/char).
std::string encode_bits(std::span<const std::uint8_t> in, std::string_view alphabet,
                        unsigned bits, std::size_t group_chars) {
  std::string out;
  std::uint32_t buffer = 0;
  unsigned held = 0;
  const std::uint32_t mask = (1u << bits) - 1;
  for (std::uint8_t b : in) {
    buffer = (buffer << 8) | b;
    held += 8;
    while (held >= bits) {
      held -= bits;
      out.push_back(alphabet[(buffer >> held) & mask]);
    }
    buffer &= (1u << held) - 1;
  }
  if (held > 0) out.push_back(alphabet[(buffer << (bits - held)) & mask]);
  while (out.size() % group_chars != 0) out.push_back('=');
  return out;
}

std::string encode85(std::span<const std::uint8_t> in) {
  std::string out;
  out.reserve(encoded_length(Kind::base85, in.size()));
  for (std::size_t pos = 0; pos < in.size(); pos += 4) {
    const std::size_t n = std::min<std::size_t>(4, in.size() - pos);
    std::uint32_t value = 0;
    for (std::size_t i = 0; i < 4; ++i) value = (value << 8) | (i < n ? in[pos + i] : 0u);
    std::array<char, 5> digits{};
    for (int i = 4; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<char>(value % 85 + 33);
      value /= 85;
    }
    out.append(digits.data(), n + 1);
  }
  return out;
}

std::uint8_t symbol(const Encoding& enc, char c) {
  if (auto idx = enc.index_of(c)) return *idx;
  throw DecodeError("character '" + std::string(1, c) + "' is not in the " +
                    std::string(name(enc.kind)) + " alphabet");
}

std::vector<std::uint8_t> decode16(std::string_view text) {
  if (text.size() % 2 != 0) throw DecodeError("base16 input has odd length");
  const Encoding& enc = encoding(Kind::base16);
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(symbol(enc, text[i]) << 4 | symbol(enc, text[i + 1])));
  }
  return out;
}

std::vector<std::uint8_t> decode_bits(std::string_view text, const Encoding& enc, unsigned bits) {
  if (text.size() % enc.group_out_chars != 0) {
    throw DecodeError(std::string(name(enc.kind)) + " input length is not a multiple of " +
                      std::to_string(enc.group_out_chars));
  }
  std::size_t data_chars = text.size();
  while (data_chars > 0 && text[data_chars - 1] == '=') --data_chars;
  const std::size_t pad = text.size() - data_chars;
  // A partial trailing group must be exactly what some whole number of input
  // bytes encodes to.
  const std::size_t tail = data_chars % enc.group_out_chars;
  const std::size_t tail_bytes = tail * bits / 8;
  const bool tail_ok = tail == 0 || (tail_bytes > 0 && (tail_bytes * 8 + bits - 1) / bits == tail);
  if (pad >= enc.group_out_chars || !tail_ok) {
    throw DecodeError("malformed " + std::string(name(enc.kind)) + " padding");
  }
  std::vector<std::uint8_t> out;
  out.reserve(data_chars * bits / 8);
  std::uint32_t buffer = 0;
  unsigned held = 0;
  for (std::size_t i = 0; i < data_chars; ++i) {
    if (text[i] == '=') throw DecodeError("padding character inside " + std::string(name(enc.kind)) + " data");
    buffer = (buffer << bits) | symbol(enc, text[i]);
    held += bits;
    if (held >= 8) {
      held -= 8;
      out.push_back(static_cast<std::uint8_t>(buffer >> held));
      buffer &= (1u << held) - 1;
    }
  }
  return out;
}

std::vector<std::uint8_t> decode85(std::string_view text) {
  if (text.size() % 5 == 1) throw DecodeError("base85 input ends with a single-character group");
  const Encoding& enc = encoding(Kind::base85);
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 5 * 4 + 3);
  for (std::size_t pos = 0; pos < text.size(); pos += 5) {
    const std::size_t n = std::min<std::size_t>(5, text.size() - pos);
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < 5; ++i) value = value * 85 + (i < n ? symbol(enc, text[pos + i]) : 84u);
    if (value > 0xffffffffULL) throw DecodeError("base85 group exceeds 2^32 - 1");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      out.push_back(static_cast<std::uint8_t>(value >> (24 - 8 * i)));
    }
  }
  return out;
}

}  // namespace

std::optional<std::uint8_t> Encoding::index_of(char c) const noexcept {
  switch (kind) {
    case Kind::base16:
      if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
      if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
      if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
      return std::nullopt;
    case Kind::base85:
      if (c >= '!' && c <= 'u') return static_cast<std::uint8_t>(c - '!');
      return std::nullopt;
    default: {
      const auto pos = alphabet.find(c);
      if (pos == std::string_view::npos) return std::nullopt;
      return static_cast<std::uint8_t>(pos);
    }
  }
}

const Encoding& encoding(Kind kind) noexcept { return kEncodings[static_cast<std::size_t>(kind)]; }

std::string_view name(Kind kind) noexcept {
  switch (kind) {
    case Kind::base16: return "base16";
    case Kind::base32: return "base32";
    case Kind::base64: return "base64";
    case Kind::base85: return "base85";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view text) noexcept {
  if (text.starts_with("base")) text.remove_prefix(4);
  if (text == "16") return Kind::base16;
  if (text == "32") return Kind::base32;
  if (text == "64") return Kind::base64;
  if (text == "85") return Kind::base85;
  return std::nullopt;
}

std::string encode(Kind kind, std::span<const std::uint8_t> payload) {
  switch (kind) {
    case Kind::base16: return encode16(payload);
    case Kind::base32: return encode_bits(payload, kBase32, 5, 8);
    case Kind::base64: return encode_bits(payload, kBase64, 6, 4);
    case Kind::base85: return encode85(payload);
  }
  return {};
}

std::vector<std::uint8_t> decode(Kind kind, std::string_view text) {
  switch (kind) {
    case Kind::base16: return decode16(text);
    case Kind::base32: return decode_bits(text, encoding(kind), 5);
    case Kind::base64: return decode_bits(text, encoding(kind), 6);
    case Kind::base85: return decode85(text);
  }
  return {};
}

std::string strip_padding(Kind kind, std::string_view text) {
  if (encoding(kind).uses_padding) {
    while (!text.empty() && text.back() == '=') text.remove_suffix(1);
  }
  return std::string(text);
}

std::size_t encoded_length(Kind kind, std::size_t n) noexcept {
  const Encoding& enc = encoding(kind);
  if (kind == Kind::base85) return n / 4 * 5 + (n % 4 == 0 ? 0 : n % 4 + 1);
  return (n + enc.group_in_bytes - 1) / enc.group_in_bytes * enc.group_out_chars;
}

}  // namespace isaid::codec
