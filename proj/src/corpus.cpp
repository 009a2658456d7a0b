#include "isaid/corpus.hpp"

#include "isaid/codec.hpp"
#include "isaid/error.hpp"
#include "isaid/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace isaid::corpus {

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::unordered_set<std::string> ids;
  std::set<std::string> labels;
  for (const auto& doc : documents_) {
    if (!ids.insert(doc.id).second) throw DataError("duplicate document id '" + doc.id + "'");
    if (doc.label) labels.insert(*doc.label);
  }
  labels_.assign(labels.begin(), labels.end());
}

std::vector<std::size_t> Corpus::indices_of(const std::string& label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (documents_[i].label == label) out.push_back(i);
  }
  return out;
}

Corpus Corpus::subset(std::span<const std::size_t> indices) const {
  std::vector<Document> docs;
  docs.reserve(indices.size());
  for (std::size_t i : indices) docs.push_back(documents_.at(i));
  return Corpus(std::move(docs));
}

Corpus Corpus::with_labels(std::span<const std::string> labels) const {
  std::vector<Document> docs;
  for (const auto& doc : documents_) {
    if (doc.label && std::find(labels.begin(), labels.end(), *doc.label) != labels.end()) {
      docs.push_back(doc);
    }
  }
  return Corpus(std::move(docs));
}

namespace {

void warn(IngestStats* stats, std::string message) {
  if (stats) {
    ++stats->skipped;
    stats->warnings.push_back(std::move(message));
  }
}

Corpus read_directory(const fs::path& root, IngestStats* stats) {
  if (!fs::is_directory(root)) throw DataError("not a directory: " + root.string());
  std::vector<fs::path> label_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) label_dirs.push_back(entry.path());
  }
  std::sort(label_dirs.begin(), label_dirs.end());

  std::vector<Document> docs;
  for (const auto& dir : label_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const std::string label = dir.filename().string();
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw DataError("cannot read " + file.string());
      std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
      const std::string id = label + "/" + file.filename().string();
      if (bytes.empty()) {
        warn(stats, id + ": empty payload");
        continue;
      }
      docs.push_back({std::move(bytes), label, id});
    }
  }
  if (stats) stats->accepted = docs.size();
  return Corpus(std::move(docs));
}

}  // namespace

Corpus read_jsonl(std::istream& in, IngestStats* stats) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      warn(stats, where + ": not a JSON object");
      continue;
    }
    auto data = record.find("data_b64");
    if (data == record.end() || !data->is_string()) {
      warn(stats, where + ": missing string field data_b64");
      continue;
    }
    Document doc;
    try {
      doc.payload = codec::decode(codec::Kind::base64, data->get<std::string>());
    } catch (const DecodeError& e) {
      warn(stats, where + ": " + e.what());
      continue;
    }
    if (doc.payload.empty()) {
      warn(stats, where + ": empty payload");
      continue;
    }
    if (auto label = record.find("label"); label != record.end() && label->is_string()) {
      doc.label = label->get<std::string>();
    }
    if (auto id = record.find("id"); id != record.end() && id->is_string()) {
      doc.id = id->get<std::string>();
    } else {
      doc.id = std::to_string(line_no);
    }
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) throw DataError("zero valid records");
  if (stats) stats->accepted = docs.size();
  return Corpus(std::move(docs));
}

Corpus ingest(const fs::path& path, Format format, IngestStats* stats) {
  if (!fs::exists(path)) throw DataError("no such file or directory: " + path.string());
  if (format == Format::directory) return read_directory(path, stats);
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return read_jsonl(in, stats);
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents()) {
    json record;
    if (doc.label) record["label"] = *doc.label;
    record["data_b64"] = codec::encode(codec::Kind::base64, doc.payload);
    record["id"] = doc.id;
    out << record.dump() << '\n';
  }
}

void write_jsonl(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_jsonl(corpus, out);
  if (!out) throw DataError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------

void validate(const SplitSpec& spec, const Corpus& corpus) {
  if (spec.repeats == 0) throw std::invalid_argument("split repeats must be >= 1");
  if (spec.train_per_class == 0) throw std::invalid_argument("train_per_class must be >= 1");
  if (corpus.label_set().empty()) throw DataError("corpus has no labeled documents");
  for (const auto& doc : corpus.documents()) {
    if (!doc.label) throw DataError("document '" + doc.id + "' has no label; splits need labels");
  }
  const std::size_t need = spec.train_per_class + spec.test_per_class;
  for (const auto& label : corpus.label_set()) {
    const std::size_t have = corpus.indices_of(label).size();
    if (have < need) {
      throw DataError("class '" + label + "' has " + std::to_string(have) + " documents, split needs " +
                      std::to_string(need));
    }
  }
}

bool repeats_are_disjoint(const Corpus& corpus, const SplitSpec& spec) {
  const std::size_t block = spec.train_per_class + spec.test_per_class;
  for (const auto& label : corpus.label_set()) {
    if (corpus.indices_of(label).size() < spec.repeats * block) return false;
  }
  return true;
}

Split split(const Corpus& corpus, const SplitSpec& spec, std::size_t repeat_index) {
  validate(spec, corpus);
  if (repeat_index >= spec.repeats) throw std::invalid_argument("repeat_index out of range");

  const bool disjoint = repeats_are_disjoint(corpus, spec);
  const std::size_t block = spec.train_per_class + spec.test_per_class;
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  const auto& labels = corpus.label_set();
  for (std::size_t c = 0; c < labels.size(); ++c) {
    std::vector<std::size_t> members = corpus.indices_of(labels[c]);
    const std::uint64_t stream = disjoint ? c : (static_cast<std::uint64_t>(repeat_index) << 32) ^ c;
    SplitMix64 rng(mix_seed(spec.seed, stream));
    shuffle(std::span(members), rng);
    const std::size_t offset = disjoint ? repeat_index * block : 0;
    auto first = members.begin() + static_cast<std::ptrdiff_t>(offset);
    auto mid = first + static_cast<std::ptrdiff_t>(spec.train_per_class);
    train_idx.insert(train_idx.end(), first, mid);
    test_idx.insert(test_idx.end(), mid, mid + static_cast<std::ptrdiff_t>(spec.test_per_class));
  }
  return {corpus.subset(train_idx), corpus.subset(test_idx)};
}

}  // namespace isaid::corpus
