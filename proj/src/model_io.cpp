#include "isaid/classify.hpp"

#include "isaid/error.hpp"
#include "isaid/numeric_text.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace isaid::classify {
namespace {

constexpr std::string_view kMagic = "isaid-model";

std::uint32_t crc32_of(std::string_view text) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (!text.empty()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(text.size(), 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(text.data()), chunk);
    text.remove_prefix(chunk);
  }
  return static_cast<std::uint32_t>(crc);
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

template <typename Range>
void write_values(std::ostream& out, const Range& values) {
  out << ' ' << values.size();
  for (const auto& v : values) {
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
      out << ' ' << format_double(v);
    } else {
      out << ' ' << v;
    }
  }
  out << '\n';
}

[[noreturn]] void corrupt(const std::string& what) { throw ModelFormatError("corrupt model file: " + what); }

// Line-oriented reader over the verified body.
class Reader {
 public:
  explicit Reader(std::string body) : in_(std::move(body)) {}

  std::istringstream& expect(std::string_view key) {
    if (!std::getline(in_, line_)) corrupt("truncated before '" + std::string(key) + "'");
    fields_.clear();
    fields_.str(line_);
    std::string got;
    fields_ >> got;
    if (got != key) corrupt("expected '" + std::string(key) + "', found '" + got + "'");
    return fields_;
  }

  std::string peek_key() {
    const auto pos = in_.tellg();
    std::string key;
    in_ >> key;
    in_.seekg(pos);
    return key;
  }

  template <typename T>
  T scalar(std::string_view key) {
    auto& f = expect(key);
    T v{};
    if (!(f >> v)) corrupt("bad value for '" + std::string(key) + "'");
    return v;
  }

  std::vector<double> doubles(std::istream& f, std::string_view what) {
    std::size_t n = 0;
    if (!(f >> n)) corrupt("bad length for " + std::string(what));
    std::vector<double> out;
    out.reserve(std::min<std::size_t>(n, 1u << 24));
    std::string tok;
    for (std::size_t i = 0; i < n; ++i) {
      double v;
      if (!(f >> tok) || !parse_double(tok, v)) corrupt("bad number in " + std::string(what));
      out.push_back(v);
    }
    return out;
  }

 private:
  std::istringstream in_;
  std::istringstream fields_;
  std::string line_;
};

std::string_view bool_text(bool b) { return b ? "1" : "0"; }

}  // namespace

void save_model(const TrainedModel& model, std::ostream& out) {
  std::ostringstream body;
  const auto& schema = model.schema();
  const auto& cfg = schema.config();
  body << kMagic << ' ' << kModelFormatMajor << '.' << kModelFormatMinor << '\n';
  body << "features.method " << features::name(cfg.method) << '\n';
  body << "features.encoding " << (cfg.encoding ? codec::name(*cfg.encoding) : "none") << '\n';
  body << "features.trigram_cap " << cfg.trigram_cap << '\n';
  body << "features.l2_normalize " << bool_text(cfg.l2_normalize) << '\n';
  body << "features.orders " << bool_text(cfg.orders[0]) << ' ' << bool_text(cfg.orders[1]) << ' '
       << bool_text(cfg.orders[2]) << '\n';
  body << "features.endianness_block " << bool_text(cfg.endianness_block) << '\n';
  if (features::is_tfidf(cfg.method)) {
    const auto& vocab = schema.vocabulary();
    body << "vocab.radix " << vocab.radix << '\n';
    body << "vocab.fit_corpus_size " << vocab.fit_corpus_size << '\n';
    body << "vocab.trigrams";
    write_values(body, vocab.trigrams);
    body << "vocab.idf";
    write_values(body, vocab.idf);
  }
  const auto& spec = model.spec();
  body << "classifier.kind " << name(spec.kind) << '\n';
  body << "classifier.seed " << spec.seed << '\n';
  const auto hp = spec.effective();
  body << "classifier.hyperparameters " << hp.size();
  for (const auto& [key, value] : hp) body << ' ' << key << ' ' << format_double(value);
  body << '\n';
  body << "labels " << model.labels().size();
  for (const auto& label : model.labels()) body << ' ' << std::quoted(label);
  body << '\n';
  const auto params = model.classifier().parameters();
  body << "parameters " << params.size() << '\n';
  for (const auto& p : params) {
    body << "param " << p.name << ' ' << p.shape.size();
    for (std::size_t s : p.shape) body << ' ' << s;
    write_values(body, p.values);
  }
  body << "end\n";
  const std::string text = body.str();
  out << text << "checksum " << hex32(crc32_of(text)) << '\n';
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(model, out);
  if (!out) throw DataError("write failed: " + path.string());
}

TrainedModel load_model(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  // Version first, so a newer file reports a version mismatch rather than a
  // checksum failure.
  const auto first_nl = text.find('\n');
  if (first_nl == std::string::npos) corrupt("missing header");
  {
    std::istringstream header(text.substr(0, first_nl));
    std::string magic;
    std::string version;
    header >> magic >> version;
    if (magic != kMagic) throw ModelFormatError("not an isaid model file");
    const auto dot = version.find('.');
    int major = -1;
    try {
      major = std::stoi(version.substr(0, dot));
    } catch (const std::exception&) {
      corrupt("bad version '" + version + "'");
    }
    if (major != kModelFormatMajor) {
      throw ModelFormatError("model format version mismatch: file has " + version + ", reader supports " +
                             std::to_string(kModelFormatMajor) + ".x");
    }
  }

  const auto tag = text.rfind("checksum ");
  if (tag == std::string::npos || (tag > 0 && text[tag - 1] != '\n')) corrupt("missing checksum (truncated?)");
  std::string stored = text.substr(tag + 9);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  const std::string body = text.substr(0, tag);
  if (stored != hex32(crc32_of(body))) throw ModelFormatError("model checksum mismatch: file is corrupt");

  Reader r(body);
  r.expect(kMagic);
  features::FeatureConfig cfg;
  {
    const auto m = features::parse_method(r.scalar<std::string>("features.method"));
    if (!m) corrupt("unknown feature method");
    cfg.method = *m;
    const auto enc = r.scalar<std::string>("features.encoding");
    if (enc != "none") {
      cfg.encoding = codec::parse_kind(enc);
      if (!cfg.encoding) corrupt("unknown encoding '" + enc + "'");
    }
    cfg.trigram_cap = r.scalar<std::size_t>("features.trigram_cap");
    cfg.l2_normalize = r.scalar<int>("features.l2_normalize") != 0;
    auto& orders = r.expect("features.orders");
    for (auto& o : cfg.orders) {
      int v = 0;
      if (!(orders >> v)) corrupt("bad features.orders");
      o = v != 0;
    }
    cfg.endianness_block = r.scalar<int>("features.endianness_block") != 0;
  }

  features::FeatureSchema schema;
  try {
    if (features::is_tfidf(cfg.method)) {
      features::GramVocabulary vocab;
      vocab.radix = r.scalar<std::uint32_t>("vocab.radix");
      vocab.fit_corpus_size = r.scalar<std::size_t>("vocab.fit_corpus_size");
      for (double code : r.doubles(r.expect("vocab.trigrams"), "vocab.trigrams")) {
        if (code < 0 || code > 4294967295.0 || code != static_cast<double>(static_cast<std::uint32_t>(code))) {
          corrupt("bad 3-gram code");
        }
        vocab.trigrams.push_back(static_cast<std::uint32_t>(code));
      }
      vocab.idf = r.doubles(r.expect("vocab.idf"), "vocab.idf");
      schema = features::FeatureSchema::from_vocabulary(cfg, std::move(vocab));
    } else {
      schema = features::FeatureSchema::histogram(cfg);
    }
  } catch (const std::invalid_argument& e) {
    corrupt(e.what());
  }

  ClassifierSpec spec;
  {
    const auto kind = parse_kind(r.scalar<std::string>("classifier.kind"));
    if (!kind) corrupt("unknown classifier kind");
    spec.kind = *kind;
    spec.seed = r.scalar<std::uint64_t>("classifier.seed");
    auto& f = r.expect("classifier.hyperparameters");
    std::size_t n = 0;
    if (!(f >> n)) corrupt("bad hyperparameter count");
    for (std::size_t i = 0; i < n; ++i) {
      std::string key;
      std::string value;
      double v;
      if (!(f >> key >> value) || !parse_double(value, v)) corrupt("bad hyperparameter");
      spec.hyperparameters[key] = v;
    }
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      corrupt(e.what());
    }
  }

  std::vector<std::string> labels;
  {
    auto& f = r.expect("labels");
    std::size_t n = 0;
    if (!(f >> n)) corrupt("bad label count");
    for (std::size_t i = 0; i < n; ++i) {
      std::string label;
      if (!(f >> std::quoted(label))) corrupt("bad label");
      labels.push_back(std::move(label));
    }
    if (!std::is_sorted(labels.begin(), labels.end()) || labels.size() < 2) corrupt("labels must be >= 2 and sorted");
  }

  Parameters params;
  const auto count = r.scalar<std::size_t>("parameters");
  for (std::size_t i = 0; i < count; ++i) {
    auto& f = r.expect("param");
    ParameterArray p;
    std::size_t rank = 0;
    if (!(f >> p.name >> rank) || rank > 4) corrupt("bad parameter header");
    p.shape.resize(rank);
    for (auto& s : p.shape) {
      if (!(f >> s)) corrupt("bad parameter shape");
    }
    p.values = r.doubles(f, "parameter " + p.name);
    params.push_back(std::move(p));
  }
  r.expect("end");

  auto classifier = make_classifier(spec);
  classifier->restore(params, labels.size(), schema.dimension());
  return TrainedModel(std::move(schema), std::move(spec), std::move(labels), std::move(classifier));
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model file " + path.string());
  return load_model(in);
}

}  // namespace isaid::classify
