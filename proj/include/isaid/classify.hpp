#pragma once

#include "isaid/corpus.hpp"
#include "isaid/sparse.hpp"
#include "isaid/vectorize.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace isaid::classify {

enum class Kind { mnb, cnb, gnb, knn, perceptron, softmax_lr, linear_svm };

inline constexpr Kind kAllKinds[] = {Kind::mnb, Kind::cnb, Kind::gnb, Kind::knn,
                                     Kind::perceptron, Kind::softmax_lr, Kind::linear_svm};

std::string_view name(Kind kind) noexcept;  // "mnb", "cnb", "gnb", "knn", "ptn", "lr", "svm"
/// Accepts the short names plus "perceptron", "softmax_lr", "linear_svm".
std::optional<Kind> parse_kind(std::string_view text) noexcept;

/// Classifier choice plus hyperparameter overrides. Unset hyperparameters take
/// the per-kind defaults:
///   mnb, cnb    alpha = 1.0
///   gnb         var_floor = 1e-9
///   knn         k = 3
///   perceptron  epochs = 20
///   softmax_lr  learning_rate = 0.1, epochs = 50, batch_size = 32, l2 = 1e-4
///   linear_svm  lambda = 1e-4, epochs = 50
struct ClassifierSpec {
  Kind kind = Kind::cnb;
  std::map<std::string, double> hyperparameters;
  std::uint64_t seed = 0;

  ClassifierSpec() = default;
  explicit ClassifierSpec(Kind k, std::uint64_t s = 0) : kind(k), seed(s) {}

  /// Override or default. Throws std::invalid_argument for names the kind
  /// does not use.
  double get(std::string_view hyperparameter) const;
  ClassifierSpec& set(const std::string& hyperparameter, double value);
  /// Every hyperparameter of this kind with its effective value.
  std::map<std::string, double> effective() const;
  /// Throws std::invalid_argument on unknown names or out-of-range values.
  void validate() const;
};

/// Feature rows with integer targets in [0, classes).
struct Dataset {
  std::vector<SparseVector> rows;
  std::vector<std::size_t> targets;
  std::size_t dimension = 0;
  std::size_t classes = 0;
};

/// Named numeric array; the unit of parameter persistence.
struct ParameterArray {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;

  bool operator==(const ParameterArray&) const = default;
};
using Parameters = std::vector<ParameterArray>;

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual void fit(const Dataset& data) = 0;
  /// One score per class; higher is better.
  virtual std::vector<double> scores(const SparseVector& x) const = 0;

  virtual Parameters parameters() const = 0;
  /// Restores fitted state; throws ModelFormatError on inconsistent arrays.
  virtual void restore(const Parameters& params, std::size_t classes, std::size_t dimension) = 0;
};

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

struct Prediction {
  std::string label;
  std::size_t index = 0;
  std::vector<double> scores;  // aligned with TrainedModel::labels()

  double top_score() const { return scores[index]; }
};

/// Index of the largest score; exact ties go to the lower index, i.e. the
/// lexicographically smaller label.
std::size_t argmax(std::span<const double> scores) noexcept;

/// Feature schema plus fitted classifier. Predictions depend only on the
/// stored parameters and the input.
class TrainedModel {
 public:
  TrainedModel(features::FeatureSchema schema, ClassifierSpec spec, std::vector<std::string> labels,
               std::shared_ptr<const Classifier> classifier);

  const features::FeatureSchema& schema() const noexcept { return schema_; }
  const ClassifierSpec& spec() const noexcept { return spec_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Classifier& classifier() const noexcept { return *classifier_; }

  Prediction predict(std::span<const std::uint8_t> payload) const;
  Prediction predict(const corpus::Document& doc) const { return predict(doc.payload); }
  Prediction predict_features(const SparseVector& x) const;

 private:
  features::FeatureSchema schema_;
  ClassifierSpec spec_;
  std::vector<std::string> labels_;
  std::shared_ptr<const Classifier> classifier_;
};

/// Builds the dataset for `train` under a fitted schema, labels sorted ascending.
/// Throws DataError on unlabeled documents or non-finite features.
Dataset make_dataset(const features::FeatureSchema& schema, const corpus::Corpus& train,
                     std::span<const std::string> labels);

/// Fits a classifier on `train` using an already fitted schema. Throws
/// DataError when fewer than two labels are present.
TrainedModel fit(const ClassifierSpec& spec, const features::FeatureSchema& schema,
                 const corpus::Corpus& train);

/// Same, on a precomputed dataset whose target indices refer to `labels`.
TrainedModel fit(const ClassifierSpec& spec, const features::FeatureSchema& schema,
                 std::vector<std::string> labels, const Dataset& data);

Prediction predict(const TrainedModel& model, const corpus::Document& doc);

// ---------------------------------------------------------------------------
// Persistence. Text format, see README for the field layout.

inline constexpr int kModelFormatMajor = 1;
inline constexpr int kModelFormatMinor = 0;

void save_model(const TrainedModel& model, std::ostream& out);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
/// Throws ModelFormatError on version mismatch, checksum failure, or
/// truncated/corrupt content.
TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace isaid::classify
