#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isaid::ngram {

inline constexpr int kMaxN = 3;

/// A contiguous run of 1..3 terms. Terms are bytes in byte mode and
/// characters (stored as their byte value) in character mode.
struct Gram {
  std::array<std::uint8_t, kMaxN> terms{};
  std::uint8_t n = 0;

  static Gram of(std::span<const std::uint8_t> window);
  static Gram of(std::string_view window);

  std::span<const std::uint8_t> view() const noexcept { return {terms.data(), n}; }
  std::string str() const { return {terms.begin(), terms.begin() + n}; }

  // Shorter grams order first; equal lengths compare term by term.
  auto operator<=>(const Gram&) const = default;
};

struct GramCounts {
  std::map<Gram, std::size_t> counts;
  /// total_by_n[n] = number of length-n windows, max(0, len - n + 1).
  std::array<std::size_t, kMaxN + 1> total_by_n{};

  std::size_t count(const Gram& g) const noexcept {
    auto it = counts.find(g);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Stride-1 sliding window counts for a single n. Throws std::invalid_argument
/// unless 1 <= n <= 3.
GramCounts extract_grams(std::span<const std::uint8_t> doc, int n);
GramCounts extract_grams(std::string_view doc, int n);

/// Counts for every n in [1, max_n] merged into one GramCounts.
GramCounts extract_all(std::span<const std::uint8_t> doc, int max_n = kMaxN);

/// Overlapping, unaligned occurrences of pattern in doc.
std::size_t count_subsequence(std::span<const std::uint8_t> doc,
                              std::span<const std::uint8_t> pattern);

/// Number of windows of length n in a document of len terms.
constexpr std::size_t window_count(std::size_t len, int n) noexcept {
  const auto width = static_cast<std::size_t>(n);
  return len >= width ? len - width + 1 : 0;
}

/// Integer code of a window over symbols in [0, radix): the window read as a
/// base-radix number, so code order equals lexicographic symbol order.
inline std::uint32_t gram_code(std::span<const std::uint8_t> window, std::uint32_t radix) noexcept {
  std::uint32_t code = 0;
  for (std::uint8_t t : window) code = code * radix + t;
  return code;
}

/// Codes of every length-n window, in document order.
std::vector<std::uint32_t> gram_codes(std::span<const std::uint8_t> symbols, int n,
                                      std::uint32_t radix);

}  // namespace isaid::ngram
