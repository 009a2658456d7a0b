#include "isaid/classify.hpp"

#include "classifiers.hpp"
#include "isaid/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isaid::classify {

std::string_view name(Kind kind) noexcept {
  switch (kind) {
    case Kind::mnb: return "mnb";
    case Kind::cnb: return "cnb";
    case Kind::gnb: return "gnb";
    case Kind::knn: return "knn";
    case Kind::perceptron: return "ptn";
    case Kind::softmax_lr: return "lr";
    case Kind::linear_svm: return "svm";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view text) noexcept {
  for (Kind k : kAllKinds) {
    if (text == name(k)) return k;
  }
  if (text == "perceptron") return Kind::perceptron;
  if (text == "softmax_lr" || text == "softmax-lr") return Kind::softmax_lr;
  if (text == "linear_svm" || text == "linear-svm") return Kind::linear_svm;
  return std::nullopt;
}

namespace {

std::map<std::string, double> defaults(Kind kind) {
  switch (kind) {
    case Kind::mnb:
    case Kind::cnb: return {{"alpha", 1.0}};
    case Kind::gnb: return {{"var_floor", 1e-9}};
    case Kind::knn: return {{"k", 3.0}};
    case Kind::perceptron: return {{"epochs", 20.0}};
    case Kind::softmax_lr:
      return {{"learning_rate", 0.1}, {"epochs", 50.0}, {"batch_size", 32.0}, {"l2", 1e-4}};
    case Kind::linear_svm: return {{"lambda", 1e-4}, {"epochs", 50.0}};
  }
  return {};
}

bool is_count(const std::string& hp) { return hp == "k" || hp == "epochs" || hp == "batch_size"; }

std::size_t as_count(double v) { return static_cast<std::size_t>(v); }

}  // namespace

double ClassifierSpec::get(std::string_view hyperparameter) const {
  const auto all = defaults(kind);
  auto it = all.find(std::string(hyperparameter));
  if (it == all.end()) {
    throw std::invalid_argument("classifier " + std::string(name(kind)) + " has no hyperparameter '" +
                                std::string(hyperparameter) + "'");
  }
  auto over = hyperparameters.find(it->first);
  return over == hyperparameters.end() ? it->second : over->second;
}

ClassifierSpec& ClassifierSpec::set(const std::string& hyperparameter, double value) {
  hyperparameters[hyperparameter] = value;
  return *this;
}

std::map<std::string, double> ClassifierSpec::effective() const {
  auto all = defaults(kind);
  for (auto& [key, value] : all) value = get(key);
  return all;
}

void ClassifierSpec::validate() const {
  const auto all = defaults(kind);
  for (const auto& [key, value] : hyperparameters) {
    if (!all.contains(key)) {
      throw std::invalid_argument("classifier " + std::string(name(kind)) + " has no hyperparameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw std::invalid_argument("hyperparameter " + key + " must be finite");
  }
  for (const auto& [key, value] : effective()) {
    if (is_count(key)) {
      if (value < 1.0 || value != std::floor(value)) {
        throw std::invalid_argument("hyperparameter " + key + " must be a positive integer");
      }
    } else if (!(value > 0.0)) {
      throw std::invalid_argument("hyperparameter " + key + " must be > 0");
    }
  }
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  spec.validate();
  using namespace detail;
  switch (spec.kind) {
    case Kind::mnb: return std::make_unique<MultinomialNB>(spec.get("alpha"));
    case Kind::cnb: return std::make_unique<ComplementNB>(spec.get("alpha"));
    case Kind::gnb: return std::make_unique<GaussianNB>(spec.get("var_floor"));
    case Kind::knn: return std::make_unique<KNearest>(as_count(spec.get("k")));
    case Kind::perceptron: return std::make_unique<AveragedPerceptron>(as_count(spec.get("epochs")), spec.seed);
    case Kind::softmax_lr:
      return std::make_unique<SoftmaxRegression>(spec.get("learning_rate"), as_count(spec.get("epochs")),
                                                 as_count(spec.get("batch_size")), spec.get("l2"), spec.seed);
    case Kind::linear_svm:
      return std::make_unique<LinearSvm>(spec.get("lambda"), as_count(spec.get("epochs")), spec.seed);
  }
  throw std::logic_error("unhandled classifier kind");
}

std::size_t argmax(std::span<const double> scores) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

TrainedModel::TrainedModel(features::FeatureSchema schema, ClassifierSpec spec, std::vector<std::string> labels,
                           std::shared_ptr<const Classifier> classifier)
    : schema_(std::move(schema)), spec_(std::move(spec)), labels_(std::move(labels)),
      classifier_(std::move(classifier)) {
  if (!std::is_sorted(labels_.begin(), labels_.end())) throw std::invalid_argument("model labels must be sorted");
  if (!classifier_) throw std::invalid_argument("model without classifier");
}

Prediction TrainedModel::predict_features(const SparseVector& x) const {
  Prediction p;
  p.scores = classifier_->scores(x);
  p.index = argmax(p.scores);
  p.label = labels_[p.index];
  return p;
}

Prediction TrainedModel::predict(std::span<const std::uint8_t> payload) const {
  return predict_features(schema_.transform(payload));
}

Prediction predict(const TrainedModel& model, const corpus::Document& doc) { return model.predict(doc); }

Dataset make_dataset(const features::FeatureSchema& schema, const corpus::Corpus& train,
                     std::span<const std::string> labels) {
  Dataset data;
  data.dimension = schema.dimension();
  data.classes = labels.size();
  data.rows.reserve(train.size());
  data.targets.reserve(train.size());
  for (const auto& doc : train.documents()) {
    if (!doc.label) throw DataError("training document '" + doc.id + "' has no label");
    auto it = std::lower_bound(labels.begin(), labels.end(), *doc.label);
    if (it == labels.end() || *it != *doc.label) throw DataError("unknown label '" + *doc.label + "'");
    auto row = schema.transform(doc.payload);
    for (double v : row.values) {
      if (!std::isfinite(v)) throw DataError("non-finite feature value in document '" + doc.id + "'");
    }
    data.rows.push_back(std::move(row));
    data.targets.push_back(static_cast<std::size_t>(it - labels.begin()));
  }
  return data;
}

TrainedModel fit(const ClassifierSpec& spec, const features::FeatureSchema& schema, std::vector<std::string> labels,
                 const Dataset& data) {
  if (labels.size() < 2) throw DataError("training needs at least two labels");
  if (data.rows.empty()) throw DataError("empty training set");
  for (const auto& row : data.rows) {
    for (double v : row.values) {
      if (!std::isfinite(v)) throw DataError("non-finite feature value in training data");
    }
  }
  auto classifier = make_classifier(spec);
  classifier->fit(data);
  return TrainedModel(schema, spec, std::move(labels), std::move(classifier));
}

TrainedModel fit(const ClassifierSpec& spec, const features::FeatureSchema& schema, const corpus::Corpus& train) {
  spec.validate();
  std::vector<std::string> labels = train.label_set();
  if (labels.size() < 2) throw DataError("training needs at least two labels");
  const Dataset data = make_dataset(schema, train, labels);
  return fit(spec, schema, std::move(labels), data);
}

}  // namespace isaid::classify
