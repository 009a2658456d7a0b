#include "isaid/evaluate.hpp"

#include "isaid/error.hpp"
#include "isaid/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace isaid::evaluate {

double accuracy(std::span<const std::pair<std::string, std::string>> predictions) {
  if (predictions.empty()) throw std::invalid_argument("accuracy of an empty prediction list");
  const auto hits = std::count_if(predictions.begin(), predictions.end(),
                                  [](const auto& p) { return p.first == p.second; });
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

void summarize(EvaluationReport& report) {
  const auto& acc = report.per_repeat_accuracy;
  if (acc.empty()) throw std::invalid_argument("evaluation report without repeats");
  double sum = 0.0;
  for (double a : acc) sum += a;
  report.mean_accuracy = sum / static_cast<double>(acc.size());
  double ss = 0.0;
  for (double a : acc) ss += (a - report.mean_accuracy) * (a - report.mean_accuracy);
  report.stddev_accuracy = acc.size() > 1 ? std::sqrt(ss / static_cast<double>(acc.size() - 1)) : 0.0;
}

std::vector<double> EvaluationReport::precision() const {
  std::vector<double> out(labels.size(), 0.0);
  for (std::size_t p = 0; p < labels.size(); ++p) {
    std::size_t column = 0;
    for (std::size_t t = 0; t < labels.size(); ++t) column += confusion[t][p];
    if (column > 0) out[p] = static_cast<double>(confusion[p][p]) / static_cast<double>(column);
  }
  return out;
}

std::vector<double> EvaluationReport::recall() const {
  std::vector<double> out(labels.size(), 0.0);
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const std::size_t row = std::accumulate(confusion[t].begin(), confusion[t].end(), std::size_t{0});
    if (row > 0) out[t] = static_cast<double>(confusion[t][t]) / static_cast<double>(row);
  }
  return out;
}

namespace {

struct Scored {
  double accuracy;
  std::vector<std::vector<std::size_t>> confusion;
};

Scored score(const classify::TrainedModel& model, std::span<const SparseVector> rows,
             std::span<const std::size_t> truth) {
  const std::size_t n = model.labels().size();
  Scored s{0.0, std::vector<std::vector<std::size_t>>(n, std::vector<std::size_t>(n, 0))};
  std::size_t hits = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t guess = model.predict_features(rows[i]).index;
    ++s.confusion[truth[i]][guess];
    if (guess == truth[i]) ++hits;
  }
  s.accuracy = static_cast<double>(hits) / static_cast<double>(rows.size());
  return s;
}

}  // namespace

std::vector<SplitOutcome> evaluate_split(const corpus::Split& split, const features::FeatureConfig& features,
                                         std::span<const classify::ClassifierSpec> specs) {
  const auto schema = features::FeatureSchema::fit(split.train, features);
  const auto& labels = split.train.label_set();
  const auto train = classify::make_dataset(schema, split.train, labels);
  const auto test = classify::make_dataset(schema, split.test, labels);
  std::vector<SplitOutcome> out;
  for (const auto& spec : specs) {
    auto model = classify::fit(spec, schema, labels, train);
    auto s = score(model, test.rows, test.targets);
    out.push_back({std::move(model), s.accuracy, std::move(s.confusion)});
  }
  return out;
}

std::vector<EvaluationReport> run_comparison(const corpus::Corpus& corpus,
                                             std::span<const features::FeatureConfig> methods,
                                             std::span<const classify::ClassifierSpec> specs,
                                             const corpus::SplitSpec& split, const Progress& progress) {
  corpus::validate(split, corpus);
  for (const auto& m : methods) m.validate();
  for (const auto& s : specs) s.validate();

  const auto& labels = corpus.label_set();
  std::vector<EvaluationReport> reports;
  for (const auto& m : methods) {
    for (const auto& s : specs) {
      EvaluationReport r;
      r.features = m;
      r.classifier = s;
      r.split = split;
      r.labels = labels;
      r.confusion.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
      reports.push_back(std::move(r));
    }
  }

  for (std::size_t rep = 0; rep < split.repeats; ++rep) {
    const auto sets = corpus::split(corpus, split, rep);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      if (progress) {
        progress("repeat " + std::to_string(rep + 1) + "/" + std::to_string(split.repeats) + " " +
                 methods[mi].label());
      }
      auto outcomes = evaluate_split(sets, methods[mi], specs);
      for (std::size_t si = 0; si < specs.size(); ++si) {
        auto& r = reports[mi * specs.size() + si];
        r.per_repeat_accuracy.push_back(outcomes[si].accuracy);
        r.feature_dimension.push_back(outcomes[si].model.schema().dimension());
        for (std::size_t t = 0; t < labels.size(); ++t) {
          for (std::size_t p = 0; p < labels.size(); ++p) r.confusion[t][p] += outcomes[si].confusion[t][p];
        }
      }
    }
  }
  for (auto& r : reports) summarize(r);
  return reports;
}

LearningCurve learning_curve(const corpus::Corpus& corpus, const features::FeatureConfig& features,
                             const classify::ClassifierSpec& spec, std::span<const std::size_t> train_sizes,
                             std::span<const std::size_t> class_counts, std::size_t repeats, std::uint64_t seed,
                             std::size_t test_per_class) {
  features.validate();
  spec.validate();
  if (repeats == 0) throw std::invalid_argument("learning_curve needs repeats >= 1");
  LearningCurve curve{features, spec, {}};

  std::vector<std::size_t> classes_sorted(class_counts.begin(), class_counts.end());
  std::sort(classes_sorted.begin(), classes_sorted.end());
  std::vector<std::size_t> sizes_sorted(train_sizes.begin(), train_sizes.end());
  std::sort(sizes_sorted.begin(), sizes_sorted.end());
  const auto& all_labels = corpus.label_set();

  for (std::size_t c : classes_sorted) {
    if (c < 2 || c > all_labels.size()) {
      throw DataError("class count " + std::to_string(c) + " infeasible for a corpus with " +
                      std::to_string(all_labels.size()) + " labels");
    }
    const std::vector<std::string> labels(all_labels.begin(), all_labels.begin() + static_cast<std::ptrdiff_t>(c));

    // Fixed held-out test set and remaining pool per label.
    std::vector<std::size_t> test_idx;
    std::vector<std::vector<std::size_t>> pools;
    for (std::size_t li = 0; li < c; ++li) {
      auto members = corpus.indices_of(labels[li]);
      if (members.size() <= test_per_class) {
        throw DataError("class '" + labels[li] + "' too small for " + std::to_string(test_per_class) +
                        " held-out documents");
      }
      SplitMix64 rng(mix_seed(seed, li));
      shuffle(std::span(members), rng);
      test_idx.insert(test_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(test_per_class));
      pools.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(test_per_class), members.end());
    }
    const corpus::Corpus test = corpus.subset(test_idx);

    for (std::size_t size : sizes_sorted) {
      if (size < c) {
        throw DataError("train size " + std::to_string(size) + " gives some of the " + std::to_string(c) +
                        " classes no documents");
      }
      double sum = 0.0;
      for (std::size_t rep = 0; rep < repeats; ++rep) {
        std::vector<std::size_t> train_idx;
        for (std::size_t li = 0; li < c; ++li) {
          const std::size_t take = size / c + (li < size % c ? 1 : 0);
          if (take > pools[li].size()) {
            throw DataError("train size " + std::to_string(size) + " needs " + std::to_string(take) +
                            " documents of class '" + labels[li] + "', only " +
                            std::to_string(pools[li].size()) + " available");
          }
          auto pool = pools[li];
          SplitMix64 rng(mix_seed(seed, ((rep + 1) << 20) ^ (size << 8) ^ li));
          shuffle(std::span(pool), rng);
          train_idx.insert(train_idx.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
        }
        const corpus::Split split{corpus.subset(train_idx), test};
        sum += evaluate_split(split, features, std::span(&spec, 1)).front().accuracy;
      }
      curve.points.push_back({size, c, sum / static_cast<double>(repeats)});
    }
  }
  return curve;
}

}  // namespace isaid::evaluate
