#include "cli.hpp"

#include "isaid/classify.hpp"
#include "isaid/codec.hpp"
#include "isaid/corpus.hpp"
#include "isaid/error.hpp"
#include "isaid/evaluate.hpp"
#include "isaid/numeric_text.hpp"
#include "isaid/vectorize.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace isaid::cli {
namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::uint8_t> parse_hex(std::string_view text) {
  try {
    return codec::decode(codec::Kind::base16, text);
  } catch (const DecodeError& e) {
    throw UsageError(std::string("--hex: ") + e.what());
  }
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  std::string s = codec::encode(codec::Kind::base16, bytes);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

corpus::Format parse_format(const std::string& text) {
  if (text == "jsonl") return corpus::Format::jsonl;
  if (text == "dir" || text == "directory") return corpus::Format::directory;
  throw UsageError("unknown corpus format '" + text + "'");
}

/// "tfidf-char:base16" or "tfidf-char" with the encoding taken from --encoding.
features::FeatureConfig parse_features(const std::string& text, const std::string& default_encoding,
                                       std::size_t trigram_cap, bool no_normalize) {
  const auto colon = text.find(':');
  const auto method = features::parse_method(text.substr(0, colon));
  if (!method) throw UsageError("unknown feature method '" + text + "'");
  features::FeatureConfig cfg;
  cfg.method = *method;
  cfg.trigram_cap = trigram_cap;
  cfg.l2_normalize = !no_normalize;
  const std::string enc_text = colon == std::string::npos ? default_encoding : text.substr(colon + 1);
  if (features::is_char(cfg.method)) {
    if (enc_text.empty()) throw UsageError(text + " needs --encoding base16|base32|base64|base85");
    cfg.encoding = codec::parse_kind(enc_text);
    if (!cfg.encoding) throw UsageError("unknown encoding '" + enc_text + "'");
  }
  return cfg;
}

corpus::Corpus load_corpus(const std::string& path, const std::string& format, std::ostream& err) {
  corpus::IngestStats stats;
  auto c = corpus::ingest(path, parse_format(format), &stats);
  for (const auto& w : stats.warnings) err << "warning: " << w << '\n';
  if (stats.skipped > 0) err << "skipped " << stats.skipped << " malformed record(s)\n";
  return c;
}

// Hyperparameter flags shared by train; unset flags keep kind defaults.
struct HyperFlags {
  std::map<std::string, double> values;

  void attach(CLI::App* app) {
    for (const auto& [flag, key] : kFlags) {
      app->add_option_function<double>(
          flag, [this, key = key](double v) { values[key] = v; }, "classifier hyperparameter " + std::string(key));
    }
  }

  void apply(classify::ClassifierSpec& spec) const {
    for (const auto& [key, v] : values) spec.set(key, v);
  }

  static constexpr std::pair<const char*, const char*> kFlags[] = {
      {"--alpha", "alpha"},         {"--var-floor", "var_floor"},   {"--k", "k"},   {"--epochs", "epochs"},
      {"--learning-rate", "learning_rate"}, {"--batch-size", "batch_size"}, {"--l2", "l2"}, {"--lambda", "lambda"},
  };
};

classify::ClassifierSpec parse_model(const std::string& text, std::uint64_t seed) {
  const auto kind = classify::parse_kind(text);
  if (!kind) throw UsageError("unknown model '" + text + "'");
  return classify::ClassifierSpec(*kind, seed);
}

std::string file_stem(const features::FeatureConfig& f, const classify::ClassifierSpec& s) {
  std::string stem(features::name(f.method));
  if (f.encoding) stem += "-" + std::string(codec::name(*f.encoding));
  return stem + "_" + std::string(classify::name(s.kind));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw DataError("cannot write " + path.string());
}

std::string trim(std::string s) {
  const auto end = s.find_last_not_of(" \t\r\n");
  s.erase(end == std::string::npos ? 0 : end + 1);
  const auto begin = s.find_first_not_of(" \t\r\n");
  return begin == std::string::npos ? std::string() : s.substr(begin);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"isaid: instruction set architecture identification from object code"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // codec
  auto* codec_cmd = app.add_subcommand("codec", "Base16/32/64/85 encode or decode");
  std::string codec_action;
  int base = 0;
  std::optional<std::string> hex_in;
  std::optional<std::string> text_in;
  bool hex_out = false;
  codec_cmd->add_option("action", codec_action, "encode or decode")->required()->check(CLI::IsMember({"encode", "decode"}));
  codec_cmd->add_option("--base", base, "16, 32, 64 or 85")->required()->check(CLI::IsMember({16, 32, 64, 85}));
  codec_cmd->add_option("--hex", hex_in, "encode: payload as hex instead of stdin bytes");
  codec_cmd->add_option("--text", text_in, "decode: encoded text instead of stdin");
  codec_cmd->add_flag("--hex-out", hex_out, "decode: print lowercase hex instead of raw bytes");

  // shared corpus/feature options
  struct FeatureFlags {
    std::string corpus_path;
    std::string format = "jsonl";
    std::string encoding;
    std::size_t trigram_cap = features::kDefaultTrigramCap;
    bool no_normalize = false;
  };
  const auto add_corpus = [](CLI::App* cmd, FeatureFlags& f) {
    cmd->add_option("--corpus", f.corpus_path, "corpus path")->required();
    cmd->add_option("--format", f.format, "jsonl or dir")->capture_default_str()->check(CLI::IsMember({"jsonl", "dir", "directory"}));
    cmd->add_option("--encoding", f.encoding, "base16|base32|base64|base85 for char features");
    cmd->add_option("--trigram-cap", f.trigram_cap, "maximum selected 3-grams")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_flag("--no-normalize", f.no_normalize, "skip L2 normalization of TF-IDF vectors");
  };

  // train
  auto* train_cmd = app.add_subcommand("train", "fit features and a classifier, write a model file");
  FeatureFlags train_f;
  std::string train_features;
  std::string train_model;
  std::uint64_t train_seed = 0;
  std::string train_out;
  HyperFlags hyper;
  add_corpus(train_cmd, train_f);
  train_cmd->add_option("--features", train_features, "tfidf-byte|tfidf-char|hist-byte|hist-char")->required();
  train_cmd->add_option("--model", train_model, "mnb|cnb|gnb|knn|ptn|lr|svm")->required();
  train_cmd->add_option("--seed", train_seed, "random seed")->capture_default_str();
  train_cmd->add_option("--out", train_out, "model file to write")->required();
  hyper.attach(train_cmd);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "label documents with a trained model");
  std::string predict_model;
  std::string predict_input;
  std::string predict_format = "jsonl";
  predict_cmd->add_option("--model", predict_model, "model file")->required();
  predict_cmd->add_option("--input", predict_input, "input file, or - for stdin")->required();
  predict_cmd->add_option("--format", predict_format, "jsonl or raw")->capture_default_str()->check(CLI::IsMember({"jsonl", "raw"}));

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "repeated-split comparison of feature methods and models");
  FeatureFlags eval_f;
  std::vector<std::string> eval_features{"tfidf-byte", "hist-byte", "tfidf-char:base16"};
  std::vector<std::string> eval_models{"mnb", "cnb", "gnb", "knn", "ptn", "lr", "svm"};
  corpus::SplitSpec split_spec;
  std::string eval_out;
  add_corpus(eval_cmd, eval_f);
  eval_cmd->add_option("--features", eval_features, "comma-separated methods, e.g. tfidf-byte,tfidf-char:base16")
      ->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--models", eval_models, "comma-separated models")->delimiter(',')->capture_default_str();
  eval_cmd->add_option("--repeats", split_spec.repeats, "independent splits")->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--train-per-class", split_spec.train_per_class)->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--test-per-class", split_spec.test_per_class)->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", split_spec.seed)->capture_default_str();
  eval_cmd->add_option("--out-dir", eval_out, "directory for report CSVs")->required();

  // curve
  auto* curve_cmd = app.add_subcommand("curve", "learning curve: accuracy against training-set size");
  FeatureFlags curve_f;
  std::string curve_features = "tfidf-byte";
  std::string curve_model = "svm";
  std::vector<std::size_t> curve_sizes;
  std::vector<std::size_t> curve_classes;
  std::size_t curve_repeats = 5;
  std::size_t curve_test = 80;
  std::uint64_t curve_seed = 0;
  std::string curve_out;
  add_corpus(curve_cmd, curve_f);
  curve_cmd->add_option("--features", curve_features)->capture_default_str();
  curve_cmd->add_option("--model", curve_model)->capture_default_str();
  curve_cmd->add_option("--sizes", curve_sizes, "comma-separated total training sizes")->delimiter(',')->required();
  curve_cmd->add_option("--classes", curve_classes, "comma-separated class counts")->delimiter(',')->required();
  curve_cmd->add_option("--repeats", curve_repeats)->capture_default_str()->check(CLI::PositiveNumber);
  curve_cmd->add_option("--test-per-class", curve_test)->capture_default_str()->check(CLI::PositiveNumber);
  curve_cmd->add_option("--seed", curve_seed)->capture_default_str();
  curve_cmd->add_option("--out", curve_out, "CSV output (stdout when omitted)");

  // featurize
  auto* feat_cmd = app.add_subcommand("featurize", "export feature vectors as CSV");
  FeatureFlags feat_f;
  std::string feat_features;
  std::string feat_out;
  add_corpus(feat_cmd, feat_f);
  feat_cmd->add_option("--features", feat_features)->required();
  feat_cmd->add_option("--out", feat_out, "CSV file")->required();

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic pseudo-ISA corpus as jsonl");
  std::size_t gen_classes = 12;
  std::size_t gen_docs = 318;
  std::size_t gen_len = 66;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_cmd->add_option("--classes", gen_classes)->capture_default_str()->check(CLI::Range(1, 12));
  gen_cmd->add_option("--docs-per-class", gen_docs)->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--len", gen_len, "target payload length in bytes")->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "jsonl file")->required();

  std::vector<const char*> argv{"isaid"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*codec_cmd) {
      const codec::Kind kind = *codec::parse_kind(std::to_string(base));
      if (codec_action == "encode") {
        if (text_in) throw UsageError("--text applies to decode");
        std::vector<std::uint8_t> payload =
            hex_in ? parse_hex(*hex_in)
                   : std::vector<std::uint8_t>{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        out << codec::encode(kind, payload) << '\n';
      } else {
        if (hex_in) throw UsageError("--hex applies to encode; use --text for decode input");
        const std::string text =
            trim(text_in ? *text_in : std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
        const auto bytes = codec::decode(kind, text);
        if (hex_out) {
          out << to_hex(bytes) << '\n';
        } else {
          out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        }
      }
      return kOk;
    }

    if (*train_cmd) {
      const auto cfg = parse_features(train_features, train_f.encoding, train_f.trigram_cap, train_f.no_normalize);
      auto spec = parse_model(train_model, train_seed);
      hyper.apply(spec);
      spec.validate();
      const auto data = load_corpus(train_f.corpus_path, train_f.format, err);
      const auto schema = features::FeatureSchema::fit(data, cfg);
      const auto model = classify::fit(spec, schema, data);
      classify::save_model(model, fs::path(train_out));
      out << "features " << cfg.label() << '\n';
      out << "dimension " << schema.dimension() << '\n';
      out << "training documents " << data.size() << '\n';
      for (const auto& label : data.label_set()) {
        out << "class " << label << ' ' << data.indices_of(label).size() << '\n';
      }
      return kOk;
    }

    if (*predict_cmd) {
      const auto model = classify::load_model(fs::path(predict_model));
      std::vector<corpus::Document> docs;
      if (predict_format == "raw") {
        std::vector<std::uint8_t> bytes;
        if (predict_input == "-") {
          bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        } else {
          std::ifstream f(predict_input, std::ios::binary);
          if (!f) throw DataError("cannot read " + predict_input);
          bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
        }
        docs.push_back({std::move(bytes), std::nullopt, predict_input});
      } else if (predict_input == "-") {
        corpus::IngestStats stats;
        docs = corpus::read_jsonl(in, &stats).documents();
        for (const auto& w : stats.warnings) err << "warning: " << w << '\n';
      } else {
        docs = load_corpus(predict_input, "jsonl", err).documents();
      }
      for (const auto& doc : docs) {
        const auto p = model.predict(doc);
        out << doc.id << '\t' << p.label << '\t' << format_double(p.top_score()) << '\n';
      }
      return kOk;
    }

    if (*eval_cmd) {
      std::vector<features::FeatureConfig> methods;
      for (const auto& f : eval_features) {
        methods.push_back(parse_features(f, eval_f.encoding, eval_f.trigram_cap, eval_f.no_normalize));
      }
      std::vector<classify::ClassifierSpec> specs;
      for (const auto& m : eval_models) specs.push_back(parse_model(m, split_spec.seed));
      const auto data = load_corpus(eval_f.corpus_path, eval_f.format, err);
      const auto reports = evaluate::run_comparison(data, methods, specs, split_spec,
                                                    [&](const std::string& msg) { err << msg << '\n'; });
      fs::create_directories(eval_out);
      for (const auto& r : reports) {
        const std::string stem = file_stem(r.features, r.classifier);
        write_text(fs::path(eval_out) / (stem + "_report.csv"), evaluate::render_report(r, evaluate::ReportFormat::csv));
        write_text(fs::path(eval_out) / (stem + "_confusion.csv"), evaluate::render_confusion_csv(r));
        write_text(fs::path(eval_out) / (stem + "_summary.txt"),
                   evaluate::render_report(r, evaluate::ReportFormat::text_table));
      }
      out << evaluate::render_summary(reports);
      return kOk;
    }

    if (*curve_cmd) {
      const auto cfg = parse_features(curve_features, curve_f.encoding, curve_f.trigram_cap, curve_f.no_normalize);
      const auto spec = parse_model(curve_model, curve_seed);
      const auto data = load_corpus(curve_f.corpus_path, curve_f.format, err);
      const auto curve =
          evaluate::learning_curve(data, cfg, spec, curve_sizes, curve_classes, curve_repeats, curve_seed, curve_test);
      const std::string csv = evaluate::render_curve_csv(curve);
      if (curve_out.empty()) {
        out << csv;
      } else {
        write_text(curve_out, csv);
      }
      return kOk;
    }

    if (*feat_cmd) {
      const auto cfg = parse_features(feat_features, feat_f.encoding, feat_f.trigram_cap, feat_f.no_normalize);
      const auto data = load_corpus(feat_f.corpus_path, feat_f.format, err);
      const auto schema = features::FeatureSchema::fit(data, cfg);
      const std::size_t rows = features::export_features(schema, data, feat_out);
      err << "wrote " << rows << " rows of dimension " << schema.dimension() << " to " << feat_out << '\n';
      return kOk;
    }

    if (*gen_cmd) {
      const auto specs = corpus::default_isa_specs(gen_classes);
      const auto data = corpus::generate_synthetic(specs, gen_docs, gen_len, gen_seed);
      corpus::write_jsonl(data, fs::path(gen_out));
      err << "wrote " << data.size() << " documents to " << gen_out << '\n';
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace isaid::cli
