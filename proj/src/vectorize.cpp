#include "isaid/vectorize.hpp"

#include "isaid/error.hpp"
#include "isaid/ngram.hpp"
#include "isaid/numeric_text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace isaid::features {

std::string_view name(Method method) noexcept {
  switch (method) {
    case Method::tfidf_byte: return "tfidf_byte";
    case Method::tfidf_char: return "tfidf_char";
    case Method::hist_endian_byte: return "hist_endian_byte";
    case Method::hist_endian_char: return "hist_endian_char";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "tfidf_byte") return Method::tfidf_byte;
  if (s == "tfidf_char") return Method::tfidf_char;
  if (s == "hist_endian_byte" || s == "hist_byte") return Method::hist_endian_byte;
  if (s == "hist_endian_char" || s == "hist_char") return Method::hist_endian_char;
  return std::nullopt;
}

void FeatureConfig::validate() const {
  if (is_char(method) && !encoding) {
    throw std::invalid_argument(std::string(name(method)) + " requires an encoding");
  }
  if (!is_char(method) && encoding) {
    throw std::invalid_argument(std::string(name(method)) + " does not take an encoding");
  }
  if (is_tfidf(method) && std::none_of(orders.begin(), orders.end(), [](bool b) { return b; })) {
    throw std::invalid_argument("TF-IDF schema needs at least one n-gram order");
  }
}

std::string FeatureConfig::label() const {
  std::string out(name(method));
  if (encoding) out += "/" + std::string(codec::name(*encoding));
  return out;
}

double smoothed_idf(std::size_t corpus_size, std::size_t document_frequency) noexcept {
  return std::log((static_cast<double>(corpus_size) + 1.0) /
                  (static_cast<double>(document_frequency) + 1.0)) + 1.0;
}

std::vector<std::uint8_t> symbols(std::span<const std::uint8_t> payload, Method method,
                                  std::optional<codec::Kind> encoding) {
  if (!is_char(method)) return {payload.begin(), payload.end()};
  const auto& enc = codec::encoding(*encoding);
  const std::string text = codec::strip_padding(*encoding, codec::encode(*encoding, payload));
  std::vector<std::uint8_t> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(*enc.index_of(c));
  return out;
}

namespace {

std::uint32_t radix_of(const FeatureConfig& config) {
  return is_char(config.method) ? static_cast<std::uint32_t>(codec::encoding(*config.encoding).alphabet_size())
                                : 256u;
}

std::size_t power(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

struct TrigramStat {
  std::uint64_t occurrences = 0;
  std::size_t documents = 0;
  std::size_t last_doc = ~std::size_t{0};
};

}  // namespace

FeatureSchema FeatureSchema::histogram(const FeatureConfig& config) {
  config.validate();
  if (is_tfidf(config.method)) throw std::invalid_argument("histogram() needs a histogram method");
  FeatureSchema schema;
  schema.config_ = config;
  schema.vocab_.radix = radix_of(config);
  schema.dimension_ = schema.vocab_.radix + (config.endianness_block ? kEndianMarkers.size() : 0);
  return schema;
}

FeatureSchema FeatureSchema::fit(const corpus::Corpus& train, const FeatureConfig& config) {
  config.validate();
  if (!is_tfidf(config.method)) return histogram(config);
  if (train.empty()) throw DataError("cannot fit a TF-IDF schema on an empty corpus");

  const std::uint32_t radix = radix_of(config);
  const std::size_t docs = train.size();
  std::vector<std::size_t> df1(radix, 0);
  std::vector<std::size_t> df2(power(radix, 2), 0);
  std::unordered_map<std::uint32_t, TrigramStat> tri;

  std::vector<std::uint8_t> seen1(df1.size());
  std::vector<std::uint8_t> seen2(df2.size());
  for (std::size_t d = 0; d < docs; ++d) {
    const auto sym = symbols(train[d].payload, config.method, config.encoding);
    std::fill(seen1.begin(), seen1.end(), 0);
    for (std::uint32_t code : ngram::gram_codes(sym, 1, radix)) {
      if (!seen1[code]) {
        seen1[code] = 1;
        ++df1[code];
      }
    }
    if (config.orders[1]) {
      const auto codes = ngram::gram_codes(sym, 2, radix);
      for (std::uint32_t code : codes) {
        if (!seen2[code]) {
          seen2[code] = 1;
          ++df2[code];
        }
      }
      for (std::uint32_t code : codes) seen2[code] = 0;
    }
    if (config.orders[2]) {
      for (std::uint32_t code : ngram::gram_codes(sym, 3, radix)) {
        auto& stat = tri[code];
        ++stat.occurrences;
        if (stat.last_doc != d) {
          stat.last_doc = d;
          ++stat.documents;
        }
      }
    }
  }

  GramVocabulary vocab;
  vocab.radix = radix;
  vocab.fit_corpus_size = docs;
  if (config.orders[2]) {
    // When every 3-gram fits under the cap the block enumerates them all,
    // unobserved ones ranked last with count 0.
    const std::size_t all = power(radix, 3);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> ranked;
    if (all <= config.trigram_cap) {
      ranked.reserve(all);
      for (std::size_t code = 0; code < all; ++code) {
        auto it = tri.find(static_cast<std::uint32_t>(code));
        ranked.emplace_back(it == tri.end() ? 0 : it->second.occurrences, static_cast<std::uint32_t>(code));
      }
    } else {
      ranked.reserve(tri.size());
      for (const auto& [code, stat] : tri) ranked.emplace_back(stat.occurrences, code);
    }
    const std::size_t keep = std::min(config.trigram_cap, ranked.size());
    const auto by_rank = [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), by_rank);
    vocab.trigrams.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) vocab.trigrams.push_back(ranked[i].second);
  }

  if (config.orders[0]) {
    for (std::size_t df : df1) vocab.idf.push_back(smoothed_idf(docs, df));
  }
  if (config.orders[1]) {
    for (std::size_t df : df2) vocab.idf.push_back(smoothed_idf(docs, df));
  }
  for (std::uint32_t code : vocab.trigrams) {
    auto it = tri.find(code);
    vocab.idf.push_back(smoothed_idf(docs, it == tri.end() ? 0 : it->second.documents));
  }
  return from_vocabulary(config, std::move(vocab));
}

FeatureSchema FeatureSchema::from_vocabulary(const FeatureConfig& config, GramVocabulary vocabulary) {
  config.validate();
  if (!is_tfidf(config.method)) throw std::invalid_argument("from_vocabulary() needs a TF-IDF method");
  if (vocabulary.radix != radix_of(config)) throw DataError("vocabulary radix does not match the encoding");
  if (!config.orders[2] && !vocabulary.trigrams.empty()) throw DataError("3-gram block excluded but trigrams given");
  FeatureSchema schema;
  schema.config_ = config;
  schema.vocab_ = std::move(vocabulary);
  schema.index_blocks();
  if (schema.vocab_.idf.size() != schema.dimension_) {
    throw DataError("IDF table has " + std::to_string(schema.vocab_.idf.size()) + " entries, schema dimension is " +
                    std::to_string(schema.dimension_));
  }
  return schema;
}

void FeatureSchema::index_blocks() {
  std::size_t offset = 0;
  for (int n = 1; n <= 3; ++n) {
    if (!config_.orders[static_cast<std::size_t>(n - 1)]) continue;
    offsets_[static_cast<std::size_t>(n)] = offset;
    offset += block_size(n);
  }
  dimension_ = offset;
  trigram_position_.clear();
  trigram_position_.reserve(vocab_.trigrams.size());
  for (std::size_t i = 0; i < vocab_.trigrams.size(); ++i) {
    if (!trigram_position_.emplace(vocab_.trigrams[i], static_cast<std::uint32_t>(i)).second) {
      throw DataError("duplicate 3-gram in vocabulary");
    }
    if (vocab_.trigrams[i] >= power(vocab_.radix, 3)) throw DataError("3-gram code out of range");
  }
}

std::optional<std::size_t> FeatureSchema::block_offset(int n) const noexcept {
  if (n < 1 || n > 3) return std::nullopt;
  return offsets_[static_cast<std::size_t>(n)];
}

std::size_t FeatureSchema::block_size(int n) const noexcept {
  if (!is_tfidf(config_.method) || n < 1 || n > 3 || !config_.orders[static_cast<std::size_t>(n - 1)]) return 0;
  return n == 3 ? vocab_.trigrams.size() : power(vocab_.radix, n);
}

SparseVector FeatureSchema::transform(std::span<const std::uint8_t> payload) const {
  if (!fitted()) throw std::logic_error("transform called on an unfitted feature schema");
  if (payload.empty()) throw DataError("cannot featurize an empty payload");
  return is_tfidf(config_.method) ? transform_tfidf(payload) : transform_histogram(payload);
}

SparseVector FeatureSchema::transform_tfidf(std::span<const std::uint8_t> payload) const {
  const auto sym = symbols(payload, config_.method, config_.encoding);
  SparseVector out;
  out.dimension = dimension_;
  std::vector<std::uint32_t> coords;
  // Blocks are laid out in increasing n, so appending block by block keeps
  // the indices sorted.
  for (int n = 1; n <= 3; ++n) {
    const auto offset = offsets_[static_cast<std::size_t>(n)];
    if (!offset) continue;
    const auto codes = ngram::gram_codes(sym, n, vocab_.radix);
    const auto windows = static_cast<double>(codes.size());
    coords.clear();
    for (std::uint32_t code : codes) {
      if (n == 3) {
        auto it = trigram_position_.find(code);
        if (it == trigram_position_.end()) continue;
        code = it->second;
      }
      coords.push_back(static_cast<std::uint32_t>(*offset + code));
    }
    std::sort(coords.begin(), coords.end());
    for (std::size_t i = 0; i < coords.size();) {
      const std::uint32_t coord = coords[i];
      std::size_t count = 0;
      for (; i < coords.size() && coords[i] == coord; ++i) ++count;
      const double tf = static_cast<double>(count) / windows;
      out.indices.push_back(coord);
      out.values.push_back(tf * vocab_.idf[coord]);
    }
  }
  if (config_.l2_normalize) {
    const double norm = std::sqrt(out.squared_norm());
    if (norm > 0.0) out.scale(1.0 / norm);
  }
  return out;
}

SparseVector FeatureSchema::transform_histogram(std::span<const std::uint8_t> payload) const {
  auto dense = transform_hist_endian(payload, config_.method, config_.encoding, config_.endianness_block);
  return SparseVector::from_dense(dense);
}

std::vector<SparseVector> FeatureSchema::transform_all(const corpus::Corpus& corpus) const {
  std::vector<SparseVector> rows;
  rows.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) rows.push_back(transform(doc.payload));
  return rows;
}

std::vector<double> transform_hist_endian(std::span<const std::uint8_t> payload, Method method,
                                          std::optional<codec::Kind> encoding, bool endianness_block) {
  if (payload.empty()) throw DataError("cannot featurize an empty payload");
  if (is_char(method) && !encoding) throw std::invalid_argument("character histogram requires an encoding");
  const std::size_t radix = is_char(method) ? codec::encoding(*encoding).alphabet_size() : 256;
  std::vector<double> out(radix + (endianness_block ? kEndianMarkers.size() : 0), 0.0);

  const auto sym = symbols(payload, is_char(method) ? Method::hist_endian_char : Method::hist_endian_byte, encoding);
  std::vector<std::size_t> counts(radix, 0);
  for (std::uint8_t s : sym) ++counts[s];
  const auto total = static_cast<double>(sym.size());
  for (std::size_t i = 0; i < radix; ++i) out[i] = static_cast<double>(counts[i]) / total;

  if (endianness_block) {
    const auto bytes = static_cast<double>(payload.size());
    for (std::size_t m = 0; m < kEndianMarkers.size(); ++m) {
      out[radix + m] = static_cast<double>(ngram::count_subsequence(payload, kEndianMarkers[m])) / bytes;
    }
  }
  return out;
}

std::pair<int, int> simplified_endianness(std::span<const std::uint8_t> payload) {
  const std::size_t big = ngram::count_subsequence(payload, kEndianMarkers[0]);
  const std::size_t little = ngram::count_subsequence(payload, kEndianMarkers[1]);
  if (big > little) return {1, 0};
  if (little > big) return {0, 1};
  return {0, 0};
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::size_t export_features(const FeatureSchema& schema, const corpus::Corpus& corpus,
                            const std::filesystem::path& path) {
  if (!schema.fitted()) throw std::logic_error("export_features needs a fitted schema");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "id,label";
  for (std::size_t j = 0; j < schema.dimension(); ++j) out << ",f" << j;
  out << '\n';
  std::string line;
  for (const auto& doc : corpus.documents()) {
    const auto v = schema.transform(doc.payload);
    line = csv_field(doc.id) + ',' + csv_field(doc.label.value_or(""));
    std::size_t k = 0;
    for (std::size_t j = 0; j < schema.dimension(); ++j) {
      line += ',';
      if (k < v.nnz() && v.indices[k] == j) {
        line += format_double(v.values[k++]);
      } else {
        line += '0';
      }
    }
    line += '\n';
    out << line;
  }
  if (!out) throw DataError("write failed: " + path.string());
  return corpus.size();
}

}  // namespace isaid::features
