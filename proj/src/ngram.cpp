#include "isaid/ngram.hpp"

#include <algorithm>
#include <stdexcept>

namespace isaid::ngram {
namespace {

void check_order(int n) {
  if (n < 1 || n > kMaxN) {
    throw std::invalid_argument("n-gram order must be in [1, 3], got " + std::to_string(n));
  }
}

std::span<const std::uint8_t> as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void accumulate(std::span<const std::uint8_t> doc, int n, GramCounts& out) {
  const std::size_t windows = window_count(doc.size(), n);
  const auto width = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < windows; ++i) ++out.counts[Gram::of(doc.subspan(i, width))];
  out.total_by_n[static_cast<std::size_t>(n)] = windows;
}

}  // namespace

Gram Gram::of(std::span<const std::uint8_t> window) {
  check_order(static_cast<int>(window.size()));
  Gram g;
  std::copy(window.begin(), window.end(), g.terms.begin());
  g.n = static_cast<std::uint8_t>(window.size());
  return g;
}

Gram Gram::of(std::string_view window) { return of(as_bytes(window)); }

GramCounts extract_grams(std::span<const std::uint8_t> doc, int n) {
  check_order(n);
  GramCounts out;
  accumulate(doc, n, out);
  return out;
}

GramCounts extract_grams(std::string_view doc, int n) { return extract_grams(as_bytes(doc), n); }

GramCounts extract_all(std::span<const std::uint8_t> doc, int max_n) {
  check_order(max_n);
  GramCounts out;
  for (int n = 1; n <= max_n; ++n) accumulate(doc, n, out);
  return out;
}

std::size_t count_subsequence(std::span<const std::uint8_t> doc,
                              std::span<const std::uint8_t> pattern) {
  if (pattern.empty()) throw std::invalid_argument("count_subsequence: empty pattern");
  std::size_t hits = 0;
  for (std::size_t i = 0; i + pattern.size() <= doc.size(); ++i) {
    if (std::equal(pattern.begin(), pattern.end(), doc.begin() + static_cast<std::ptrdiff_t>(i))) ++hits;
  }
  return hits;
}

std::vector<std::uint32_t> gram_codes(std::span<const std::uint8_t> symbols, int n,
                                      std::uint32_t radix) {
  check_order(n);
  const std::size_t windows = window_count(symbols.size(), n);
  const auto width = static_cast<std::size_t>(n);
  std::vector<std::uint32_t> codes;
  codes.reserve(windows);
  for (std::size_t i = 0; i < windows; ++i) codes.push_back(gram_code(symbols.subspan(i, width), radix));
  return codes;
}

}  // namespace isaid::ngram
