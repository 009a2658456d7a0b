#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isaid::corpus {

/// One object-code sample: raw decoded bytes plus an optional ISA label.
struct Document {
  std::vector<std::uint8_t> payload;
  std::optional<std::string> label;
  std::string id;
};

/// Immutable, ordered collection of documents. label_set() is the sorted set
/// of distinct labels; ids are unique.
class Corpus {
 public:
  Corpus() = default;
  /// Throws DataError on duplicate ids.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::vector<std::string>& label_set() const noexcept { return labels_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  /// Indices of the documents carrying `label`, in corpus order.
  std::vector<std::size_t> indices_of(const std::string& label) const;
  /// Documents at `indices`, in the given order.
  Corpus subset(std::span<const std::size_t> indices) const;
  /// Documents whose label is in `labels`, in corpus order.
  Corpus with_labels(std::span<const std::string> labels) const;

 private:
  std::vector<Document> documents_;
  std::vector<std::string> labels_;
};

enum class Format { jsonl, directory };

struct IngestStats {
  std::size_t accepted = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Loads a corpus. jsonl: one {"label", "data_b64", "id"} record per line,
/// id defaulting to the 1-based line number. directory: <root>/<label>/<file>
/// with raw bytes, labels and files taken in sorted name order.
/// Malformed records (bad JSON, bad Base64, empty payload) are skipped and
/// reported through `stats`; a jsonl source without a single valid record is
/// a DataError.
Corpus ingest(const std::filesystem::path& path, Format format, IngestStats* stats = nullptr);
Corpus read_jsonl(std::istream& in, IngestStats* stats = nullptr);

void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

/// Repeated stratified train/test split protocol.
struct SplitSpec {
  std::size_t train_per_class = 238;
  std::size_t test_per_class = 80;
  std::uint64_t seed = 0;
  std::size_t repeats = 50;
};

struct Split {
  Corpus train;
  Corpus test;
};

/// Throws DataError when a class is too small for the spec or documents are
/// unlabeled, std::invalid_argument on repeats == 0.
void validate(const SplitSpec& spec, const Corpus& corpus);

/// Per label, draws train_per_class + test_per_class documents without
/// replacement. When every class holds at least
/// repeats * (train_per_class + test_per_class) documents, the repeats take
/// consecutive disjoint blocks of one seeded permutation, so no document is
/// reused across repeats. Otherwise each repeat is an independent draw from a
/// permutation seeded by (seed, repeat_index). Output keeps label order, then
/// draw order.
Split split(const Corpus& corpus, const SplitSpec& spec, std::size_t repeat_index);

/// True when split() yields disjoint selections across repeats for this corpus.
bool repeats_are_disjoint(const Corpus& corpus, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Synthetic pseudo-ISA corpora

enum class Endianness { little, big };

struct SyntheticIsaSpec {
  std::string name;
  std::size_t instruction_width = 4;  // 2 or 4 bytes
  std::map<std::vector<std::uint8_t>, double> opcode_distribution;
  Endianness endianness = Endianness::little;
  double noise_zero_prob = 0.0;
  /// Probability an instruction's final two bytes hold the value 1 in the
  /// spec's byte order (00 01 big, 01 00 little).
  double immediate_small_value_prob = 0.0;
};

/// Throws std::invalid_argument when the spec is inconsistent.
void validate(const SyntheticIsaSpec& spec);

/// Each document concatenates instructions (opcode prefix, uniform random
/// operand bytes, optional immediate) with zero runs of instruction_width
/// bytes injected between instructions. Lengths fall in
/// [doc_len_bytes, 1.1 * doc_len_bytes]; only the final instruction may be
/// truncated. Class i draws from a stream seeded by (seed, i).
Corpus generate_synthetic(std::span<const SyntheticIsaSpec> specs, std::size_t docs_per_class,
                          std::size_t doc_len_bytes, std::uint64_t seed);

/// Built-in pseudo-ISA family modelled loosely on twelve real architectures:
/// some pairs differ only in byte order, others share opcode bytes but not
/// their order, so the class signal sits in multi-byte patterns.
std::vector<SyntheticIsaSpec> default_isa_specs(std::size_t classes = 12);

}  // namespace isaid::corpus
