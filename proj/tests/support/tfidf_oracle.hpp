#pragma once

// Brute-force TF-IDF reference used to check the vectorizer. Deliberately
// naive: grams are vectors of symbol indices held in ordered maps, every
// count is taken by rescanning the document, and nothing is shared with the
// library beyond the codec.

#include "isaid/codec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using Terms = std::vector<int>;

inline Terms terms_of(const std::vector<std::uint8_t>& payload, std::optional<isaid::codec::Kind> encoding) {
  Terms out;
  if (!encoding) {
    for (auto b : payload) out.push_back(b);
    return out;
  }
  std::string text = isaid::codec::encode(*encoding, payload);
  // '=' is padding in Base32/64 but an ordinary symbol in Base85.
  if (*encoding != isaid::codec::Kind::base85) {
    while (!text.empty() && text.back() == '=') text.pop_back();
  }
  const auto alphabet = isaid::codec::encoding(*encoding).alphabet;
  for (char c : text) out.push_back(static_cast<int>(alphabet.find(c)));
  return out;
}

inline std::map<Terms, int> count_grams(const Terms& doc, int n) {
  std::map<Terms, int> out;
  for (int i = 0; i + n <= static_cast<int>(doc.size()); ++i) {
    ++out[Terms(doc.begin() + i, doc.begin() + i + n)];
  }
  return out;
}

struct Model {
  int radix = 0;
  int docs = 0;
  std::vector<Terms> trigrams;  // selected, in coordinate order
  std::map<Terms, int> df;
};

/// Fits the reference vocabulary: full 1/2-gram enumeration, 3-grams ranked by
/// total occurrences with ascending tie-break, truncated at cap.
inline Model fit(const std::vector<Terms>& corpus, int radix, std::size_t cap) {
  Model m;
  m.radix = radix;
  m.docs = static_cast<int>(corpus.size());
  std::map<Terms, long> occurrences;
  for (const auto& doc : corpus) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& [g, c] : count_grams(doc, n)) {
        ++m.df[g];
        if (n == 3) occurrences[g] += c;
      }
    }
  }
  std::vector<std::pair<long, Terms>> pool;
  if (static_cast<std::size_t>(radix) * radix * radix <= cap) {
    for (int a = 0; a < radix; ++a)
      for (int b = 0; b < radix; ++b)
        for (int c = 0; c < radix; ++c) pool.push_back({occurrences[{a, b, c}], {a, b, c}});
  } else {
    for (const auto& [g, c] : occurrences) pool.push_back({c, g});
  }
  std::stable_sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  for (std::size_t i = 0; i < pool.size() && i < cap; ++i) m.trigrams.push_back(pool[i].second);
  return m;
}

inline double idf(const Model& m, const Terms& g) {
  const auto it = m.df.find(g);
  const int df = it == m.df.end() ? 0 : it->second;
  return std::log((m.docs + 1.0) / (df + 1.0)) + 1.0;
}

/// Dense vector laid out as [1-grams | 2-grams | selected 3-grams].
inline std::vector<double> transform(const Model& m, const Terms& doc, bool normalize) {
  std::vector<Terms> coords;
  for (int a = 0; a < m.radix; ++a) coords.push_back({a});
  for (int a = 0; a < m.radix; ++a)
    for (int b = 0; b < m.radix; ++b) coords.push_back({a, b});
  for (const auto& g : m.trigrams) coords.push_back(g);

  std::map<Terms, int> counts[4];
  for (int n = 1; n <= 3; ++n) counts[n] = count_grams(doc, n);
  std::vector<double> out;
  for (const auto& g : coords) {
    const int n = static_cast<int>(g.size());
    const int windows = std::max(0, static_cast<int>(doc.size()) - n + 1);
    const auto it = counts[n].find(g);
    const int count = it == counts[n].end() ? 0 : it->second;
    const double tf = windows == 0 ? 0.0 : static_cast<double>(count) / windows;
    out.push_back(tf * idf(m, g));
  }
  if (normalize) {
    double sq = 0.0;
    for (double v : out) sq += v * v;
    if (sq > 0.0) {
      const double norm = std::sqrt(sq);
      for (double& v : out) v /= norm;
    }
  }
  return out;
}

}  // namespace oracle
