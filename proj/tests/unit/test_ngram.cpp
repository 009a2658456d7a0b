#include <doctest.h>

#include "isaid/ngram.hpp"
#include "isaid/random.hpp"

#include <map>
#include <stdexcept>
#include <vector>

using namespace isaid;
using ngram::Gram;

namespace {

using Bytes = std::vector<std::uint8_t>;

Gram g(Bytes b) { return Gram::of(std::span<const std::uint8_t>(b)); }

// Re-scan every offset and compare bytes one by one.
std::map<Bytes, std::size_t> naive_counts(const Bytes& doc, int n) {
  std::map<Bytes, std::size_t> out;
  const auto w = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + w <= doc.size(); ++i) {
    Bytes key;
    for (std::size_t j = 0; j < w; ++j) key.push_back(doc[i + j]);
    ++out[key];
  }
  return out;
}

}  // namespace

TEST_CASE("ngram byte examples") {
  const Bytes doc{0xd7, 0x43, 0xd7};
  const auto one = ngram::extract_grams(doc, 1);
  CHECK(one.counts.size() == 2);
  CHECK(one.count(g({0xd7})) == 2);
  CHECK(one.count(g({0x43})) == 1);
  CHECK(one.total_by_n[1] == 3);

  const auto two = ngram::extract_grams(doc, 2);
  CHECK(two.counts.size() == 2);
  CHECK(two.count(g({0xd7, 0x43})) == 1);
  CHECK(two.count(g({0x43, 0xd7})) == 1);
  CHECK(two.total_by_n[2] == 2);

  const auto short_doc = ngram::extract_grams(Bytes{0xd7}, 3);
  CHECK(short_doc.counts.empty());
  CHECK(short_doc.total_by_n[3] == 0);
}

TEST_CASE("ngram character windows overlap") {
  const auto c = ngram::extract_grams(std::string_view("ABAB"), 2);
  CHECK(c.count(Gram::of(std::string_view("AB"))) == 2);
  CHECK(c.count(Gram::of(std::string_view("BA"))) == 1);
  CHECK(c.total_by_n[2] == 3);
}

TEST_CASE("ngram rejects n outside 1..3") {
  CHECK_THROWS_AS(ngram::extract_grams(Bytes{1, 2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(ngram::extract_grams(Bytes{1, 2}, 4), std::invalid_argument);
}

TEST_CASE("ngram count_subsequence scans unaligned and overlapping") {
  CHECK(ngram::count_subsequence(Bytes{0, 1, 0}, Bytes{0, 1}) == 1);
  CHECK(ngram::count_subsequence(Bytes{0, 1, 0}, Bytes{1, 0}) == 1);
  CHECK(ngram::count_subsequence(Bytes{0, 0, 0}, Bytes{0, 0}) == 2);
  CHECK(ngram::count_subsequence(Bytes{0}, Bytes{0, 0}) == 0);
}

TEST_CASE("ngram order sensitivity") {
  const Bytes doc{1, 2, 3, 4};
  const Bytes rev{4, 3, 2, 1};
  CHECK(ngram::extract_grams(doc, 1).counts == ngram::extract_grams(rev, 1).counts);
  CHECK(ngram::extract_grams(doc, 2).counts != ngram::extract_grams(rev, 2).counts);
}

TEST_CASE("ngram counts match a naive re-scan on 1000 random documents") {
  SplitMix64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    Bytes doc(rng.below(40));
    // Small alphabet so repeats actually occur.
    for (auto& b : doc) b = static_cast<std::uint8_t>(rng.below(rng.below(2) ? 4 : 256));
    for (int n = 1; n <= 3; ++n) {
      const auto got = ngram::extract_grams(doc, n);
      const auto want = naive_counts(doc, n);
      REQUIRE(got.counts.size() == want.size());
      std::size_t sum = 0;
      for (const auto& [key, count] : want) {
        REQUIRE(got.count(g(key)) == count);
        sum += count;
      }
      REQUIRE(got.total_by_n[static_cast<std::size_t>(n)] == sum);
      REQUIRE(sum == ngram::window_count(doc.size(), n));
    }
    const auto all = ngram::extract_all(doc);
    std::size_t total = 0;
    for (const auto& [gram, count] : all.counts) total += count;
    REQUIRE(total == all.total_by_n[1] + all.total_by_n[2] + all.total_by_n[3]);
  }
}

TEST_CASE("ngram codes follow lexicographic order") {
  const Bytes sym{2, 0, 1, 3};
  CHECK(ngram::gram_codes(sym, 1, 4) == std::vector<std::uint32_t>{2, 0, 1, 3});
  CHECK(ngram::gram_codes(sym, 2, 4) == std::vector<std::uint32_t>{8, 1, 7});
  CHECK(ngram::gram_codes(sym, 3, 4) == std::vector<std::uint32_t>{33, 7});
  CHECK(ngram::gram_code(Bytes{0xff, 0xff, 0xff}, 256) == 0xffffffu);
}
