#pragma once

// Concrete classifiers behind classify::make_classifier.

#include "isaid/classify.hpp"

#include <cstdint>
#include <vector>

namespace isaid::classify::detail {

/// Returns the array called `name`, checking its shape.
const ParameterArray& require(const Parameters& params, std::string_view name,
                              const std::vector<std::size_t>& shape);

/// Normalizes joint log-likelihoods to log-posteriors in place.
void to_log_posterior(std::vector<double>& jll);

/// Multinomial naive Bayes over fractional feature masses.
class MultinomialNB final : public Classifier {
 public:
  explicit MultinomialNB(double alpha) : alpha_(alpha) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override;
  Parameters parameters() const override;
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override;

 private:
  double alpha_;
  std::size_t classes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> log_prior_;
  std::vector<double> log_prob_;  // classes x dim
};

/// Complement naive Bayes: each class is scored against the smoothed feature
/// distribution of all other classes. Class priors are not used.
class ComplementNB final : public Classifier {
 public:
  explicit ComplementNB(double alpha) : alpha_(alpha) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override;
  Parameters parameters() const override;
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override;

 private:
  double alpha_;
  std::size_t classes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> weights_;  // classes x dim, -log complement probability
};

class GaussianNB final : public Classifier {
 public:
  explicit GaussianNB(double var_floor) : var_floor_(var_floor) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override;
  Parameters parameters() const override;
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override;

 private:
  void precompute();

  double var_floor_;
  std::size_t classes_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> log_prior_;
  std::vector<double> mean_;  // classes x dim
  std::vector<double> var_;   // classes x dim
  // Per class: log prior + log density of the all-zero vector, as a compensated
  // (sum, correction) pair. Floored variances make single terms ~1e9, so the
  // sparse correction in scores() would otherwise cancel catastrophically.
  std::vector<double> zero_loglik_;
  std::vector<double> zero_loglik_err_;
};

/// k-nearest neighbours under Euclidean distance. Score of a label is its vote
/// count minus d/(1+d) of its mean neighbour distance d; labels without votes
/// score -d/(1+d) of their nearest member. Higher votes win, then smaller mean
/// distance, then the smaller label.
class KNearest final : public Classifier {
 public:
  explicit KNearest(std::size_t k) : k_(k) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override;
  Parameters parameters() const override;
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override;

 private:
  std::size_t k_;
  std::size_t classes_ = 0;
  std::size_t dim_ = 0;
  std::vector<SparseVector> rows_;
  std::vector<std::size_t> targets_;
  // Feature -> (row, value) postings, rebuilt on fit and restore.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings_;
  std::vector<double> row_norms_;

  void index();
};

/// Dense weight matrix with one row per class, shared by the linear models.
struct LinearWeights {
  std::size_t classes = 0;
  std::size_t dim = 0;
  std::vector<double> w;     // classes x dim
  std::vector<double> bias;  // classes

  std::vector<double> decision(const SparseVector& x) const;
  Parameters to_parameters() const;
  void from_parameters(const Parameters& params, std::size_t c, std::size_t d, bool with_bias);
};

/// Averaged multiclass perceptron with bias.
class AveragedPerceptron final : public Classifier {
 public:
  AveragedPerceptron(std::size_t epochs, std::uint64_t seed) : epochs_(epochs), seed_(seed) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override { return model_.decision(x); }
  Parameters parameters() const override { return model_.to_parameters(); }
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override {
    model_.from_parameters(params, classes, dimension, true);
  }

 private:
  std::size_t epochs_;
  std::uint64_t seed_;
  LinearWeights model_;
};

/// Multinomial logistic regression, mini-batch gradient descent with an L2
/// penalty. No intercept: every feature family here has a constant L1 or L2
/// row norm, which plays that role.
class SoftmaxRegression final : public Classifier {
 public:
  SoftmaxRegression(double rate, std::size_t epochs, std::size_t batch, double l2, std::uint64_t seed)
      : rate_(rate), epochs_(epochs), batch_(batch), l2_(l2), seed_(seed) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override { return model_.decision(x); }
  Parameters parameters() const override { return model_.to_parameters(); }
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override {
    model_.from_parameters(params, classes, dimension, false);
  }

 private:
  double rate_;
  std::size_t epochs_;
  std::size_t batch_;
  double l2_;
  std::uint64_t seed_;
  LinearWeights model_;
};

/// One-vs-rest linear SVM trained with Pegasos stochastic subgradient steps
/// (step 1/(lambda t), projection onto the 1/sqrt(lambda) ball). No intercept,
/// for the same reason as SoftmaxRegression.
class LinearSvm final : public Classifier {
 public:
  LinearSvm(double lambda, std::size_t epochs, std::uint64_t seed)
      : lambda_(lambda), epochs_(epochs), seed_(seed) {}
  void fit(const Dataset& data) override;
  std::vector<double> scores(const SparseVector& x) const override { return model_.decision(x); }
  Parameters parameters() const override { return model_.to_parameters(); }
  void restore(const Parameters& params, std::size_t classes, std::size_t dimension) override {
    model_.from_parameters(params, classes, dimension, false);
  }

 private:
  double lambda_;
  std::size_t epochs_;
  std::uint64_t seed_;
  LinearWeights model_;
};

}  // namespace isaid::classify::detail
