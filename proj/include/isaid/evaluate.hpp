#pragma once

#include "isaid/classify.hpp"
#include "isaid/corpus.hpp"
#include "isaid/vectorize.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace isaid::evaluate {

/// Fraction of (true, predicted) pairs that agree. Throws
/// std::invalid_argument on an empty list.
double accuracy(std::span<const std::pair<std::string, std::string>> predictions);

struct EvaluationReport {
  features::FeatureConfig features;
  classify::ClassifierSpec classifier;
  corpus::SplitSpec split;
  std::vector<std::string> labels;
  std::vector<double> per_repeat_accuracy;
  double mean_accuracy = 0.0;
  double stddev_accuracy = 0.0;  // sample standard deviation, 0 for one repeat
  /// confusion[true][predicted], summed over repeats.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<std::size_t> feature_dimension;  // per repeat

  /// Per-label precision and recall from the summed confusion matrix; 0 where
  /// undefined.
  std::vector<double> precision() const;
  std::vector<double> recall() const;
};

/// Recomputes mean and stddev from per_repeat_accuracy. Throws
/// std::invalid_argument when there are no repeats.
void summarize(EvaluationReport& report);

/// Classifier outcome of one train/test split.
struct SplitOutcome {
  classify::TrainedModel model;
  double accuracy;
  std::vector<std::vector<std::size_t>> confusion;
};

/// Fits the feature schema on `train` only, then each classifier, and scores
/// each on `test`. Labels are train.label_set().
std::vector<SplitOutcome> evaluate_split(const corpus::Split& split, const features::FeatureConfig& features,
                                         std::span<const classify::ClassifierSpec> specs);

using Progress = std::function<void(const std::string&)>;

/// Repeated-split protocol over every (feature config, classifier) pair.
/// Reports are ordered feature-major, then classifier, and are a pure
/// function of the inputs.
std::vector<EvaluationReport> run_comparison(const corpus::Corpus& corpus,
                                             std::span<const features::FeatureConfig> methods,
                                             std::span<const classify::ClassifierSpec> specs,
                                             const corpus::SplitSpec& split, const Progress& progress = {});

struct CurvePoint {
  std::size_t train_size = 0;
  std::size_t classes = 0;
  double mean_accuracy = 0.0;
};

struct LearningCurve {
  features::FeatureConfig features;
  classify::ClassifierSpec classifier;
  std::vector<CurvePoint> points;  // sorted by (classes, train_size)
};

/// For each class count c, restricts the corpus to its first c labels, holds
/// out a fixed stratified test set of test_per_class per label, and for each
/// train size draws an equal per-class allocation (remainder to the first
/// labels) from the rest. Throws DataError on infeasible sizes.
LearningCurve learning_curve(const corpus::Corpus& corpus, const features::FeatureConfig& features,
                             const classify::ClassifierSpec& spec, std::span<const std::size_t> train_sizes,
                             std::span<const std::size_t> class_counts, std::size_t repeats, std::uint64_t seed,
                             std::size_t test_per_class = 80);

enum class ReportFormat { text_table, csv };

/// csv: header `method,encoding,classifier,repeat,accuracy`, one row per repeat.
/// text_table: summary row with mean and stddev, per-label precision/recall,
/// and the confusion matrix.
std::string render_report(const EvaluationReport& report, ReportFormat format);

/// Confusion CSV: header `true\predicted,<labels...>`, one row per true label.
std::string render_confusion_csv(const EvaluationReport& report);

/// One line per report, sorted by mean accuracy descending (stable).
std::string render_summary(std::span<const EvaluationReport> reports);

/// Learning-curve CSV: `classes,train_size,mean_accuracy`.
std::string render_curve_csv(const LearningCurve& curve);

}  // namespace isaid::evaluate
