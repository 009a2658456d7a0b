#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isaid::codec {

enum class Kind { base16, base32, base64, base85 };

/// Static description of one binary-to-text encoding.
struct Encoding {
  Kind kind;
  std::string_view alphabet;
  std::size_t group_in_bytes;
  std::size_t group_out_chars;
  bool uses_padding;

  std::size_t alphabet_size() const noexcept { return alphabet.size(); }

  /// Position of c in the alphabet, or nullopt when c is not an alphabet symbol.
  std::optional<std::uint8_t> index_of(char c) const noexcept;
};

const Encoding& encoding(Kind kind) noexcept;

std::string_view name(Kind kind) noexcept;  // "base16" ...
std::optional<Kind> parse_kind(std::string_view text) noexcept;  // "base16" or "16"

std::string encode(Kind kind, std::span<const std::uint8_t> payload);

/// Inverse of encode. Throws DecodeError on characters outside the alphabet,
/// malformed padding or group lengths, and base85 groups exceeding 2^32 - 1.
std::vector<std::uint8_t> decode(Kind kind, std::string_view text);

/// Removes trailing '=' padding.
std::string strip_padding(Kind kind, std::string_view text);

/// Length of encode(kind, payload) for a payload of n bytes.
std::size_t encoded_length(Kind kind, std::size_t n) noexcept;

}  // namespace isaid::codec
