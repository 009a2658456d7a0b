#pragma once

#include "isaid/codec.hpp"
#include "isaid/corpus.hpp"
#include "isaid/sparse.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace isaid::features {

enum class Method { tfidf_byte, tfidf_char, hist_endian_byte, hist_endian_char };

std::string_view name(Method method) noexcept;              // "tfidf_byte" ...
std::optional<Method> parse_method(std::string_view text);  // accepts '_' or '-', "hist-byte" aliases

constexpr bool is_tfidf(Method m) noexcept { return m == Method::tfidf_byte || m == Method::tfidf_char; }
constexpr bool is_char(Method m) noexcept { return m == Method::tfidf_char || m == Method::hist_endian_char; }

inline constexpr std::size_t kDefaultTrigramCap = 5000;

/// The four two-byte endianness markers, in feature order.
inline constexpr std::array<std::array<std::uint8_t, 2>, 4> kEndianMarkers{{
    {0x00, 0x01}, {0x01, 0x00}, {0xff, 0xfe}, {0xfe, 0xff}}};

/// Everything needed to build a schema, before any fitting.
struct FeatureConfig {
  Method method = Method::tfidf_byte;
  std::optional<codec::Kind> encoding;  // required iff is_char(method)
  std::size_t trigram_cap = kDefaultTrigramCap;
  bool l2_normalize = true;                    // TF-IDF only
  std::array<bool, 3> orders{true, true, true};  // TF-IDF n = 1, 2, 3 blocks
  bool endianness_block = true;                // histogram methods only

  /// Throws std::invalid_argument on inconsistent combinations.
  void validate() const;
  /// e.g. "tfidf_char/base16"
  std::string label() const;
};

/// Fitted TF-IDF vocabulary. Terms are symbol indices in [0, radix); 1- and
/// 2-gram blocks enumerate every code, the 3-gram block holds the selected
/// codes. idf has one entry per TF-IDF coordinate, in coordinate order.
struct GramVocabulary {
  std::uint32_t radix = 0;
  std::vector<std::uint32_t> trigrams;
  std::vector<double> idf;
  std::size_t fit_corpus_size = 0;
};

/// Maps a training-set document frequency to its smoothed IDF weight,
/// ln((D + 1) / (df + 1)) + 1.
double smoothed_idf(std::size_t corpus_size, std::size_t document_frequency) noexcept;

/// Term symbols of a payload under a method: raw bytes, or alphabet indices
/// of the padding-stripped encoding.
std::vector<std::uint8_t> symbols(std::span<const std::uint8_t> payload, Method method,
                                  std::optional<codec::Kind> encoding);

/// Defines feature coordinates and converts payloads to vectors. Immutable
/// once built; transform is safe to call concurrently.
class FeatureSchema {
 public:
  FeatureSchema() = default;

  /// TF-IDF schemas learn their vocabulary from `train`; histogram schemas
  /// ignore it. Throws DataError on an empty training corpus (TF-IDF).
  static FeatureSchema fit(const corpus::Corpus& train, const FeatureConfig& config);
  /// Static histogram + endianness schema.
  static FeatureSchema histogram(const FeatureConfig& config);
  /// Rebuilds a fitted TF-IDF schema from persisted parts.
  static FeatureSchema from_vocabulary(const FeatureConfig& config, GramVocabulary vocabulary);

  bool fitted() const noexcept { return dimension_ > 0; }
  const FeatureConfig& config() const noexcept { return config_; }
  Method method() const noexcept { return config_.method; }
  std::size_t dimension() const noexcept { return dimension_; }
  const GramVocabulary& vocabulary() const noexcept { return vocab_; }

  /// Offset of the n-gram block within the vector, or nullopt if excluded.
  std::optional<std::size_t> block_offset(int n) const noexcept;
  std::size_t block_size(int n) const noexcept;

  /// Throws std::logic_error if unfitted, DataError on an empty payload.
  SparseVector transform(std::span<const std::uint8_t> payload) const;
  SparseVector transform(const corpus::Document& doc) const { return transform(doc.payload); }
  std::vector<double> transform_dense(std::span<const std::uint8_t> payload) const {
    return transform(payload).to_dense();
  }
  std::vector<SparseVector> transform_all(const corpus::Corpus& corpus) const;

 private:
  SparseVector transform_tfidf(std::span<const std::uint8_t> payload) const;
  SparseVector transform_histogram(std::span<const std::uint8_t> payload) const;
  void index_blocks();

  FeatureConfig config_;
  GramVocabulary vocab_;
  std::size_t dimension_ = 0;
  std::array<std::optional<std::size_t>, 4> offsets_{};
  std::unordered_map<std::uint32_t, std::uint32_t> trigram_position_;
};

inline FeatureSchema fit_tfidf(const corpus::Corpus& train, const FeatureConfig& config) {
  return FeatureSchema::fit(train, config);
}

/// Histogram + endianness features of one payload (no fitting needed).
std::vector<double> transform_hist_endian(std::span<const std::uint8_t> payload, Method method,
                                          std::optional<codec::Kind> encoding,
                                          bool endianness_block = true);

/// Simplified byte-order indicator: (1, 0) when 00 01 outnumbers 01 00,
/// (0, 1) for the reverse, (0, 0) on a tie.
std::pair<int, int> simplified_endianness(std::span<const std::uint8_t> payload);

/// Writes `id,label,f0..f{d-1}` CSV, one row per document; returns the row count.
std::size_t export_features(const FeatureSchema& schema, const corpus::Corpus& corpus,
                            const std::filesystem::path& path);

}  // namespace isaid::features
