#include "classifiers.hpp"

#include "isaid/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isaid::classify::detail {

const ParameterArray& require(const Parameters& params, std::string_view name,
                              const std::vector<std::size_t>& shape) {
  for (const auto& p : params) {
    if (p.name != name) continue;
    if (p.shape != shape) throw ModelFormatError("parameter '" + p.name + "' has the wrong shape");
    std::size_t count = 1;
    for (std::size_t s : shape) count *= s;
    if (p.values.size() != count) throw ModelFormatError("parameter '" + p.name + "' has the wrong size");
    return p;
  }
  throw ModelFormatError("missing parameter '" + std::string(name) + "'");
}

void to_log_posterior(std::vector<double>& jll) {
  const double top = *std::max_element(jll.begin(), jll.end());
  double sum = 0.0;
  for (double v : jll) sum += std::exp(v - top);
  const double log_norm = top + std::log(sum);
  for (double& v : jll) v -= log_norm;
}

namespace {

// Per-class feature mass sums (classes x dim) and document counts.
void class_sums(const Dataset& data, std::vector<double>& mass, std::vector<std::size_t>& docs) {
  mass.assign(data.classes * data.dimension, 0.0);
  docs.assign(data.classes, 0);
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const std::size_t c = data.targets[i];
    ++docs[c];
    const auto& x = data.rows[i];
    double* row = mass.data() + c * data.dimension;
    for (std::size_t k = 0; k < x.nnz(); ++k) row[x.indices[k]] += x.values[k];
  }
}

std::vector<double> log_priors(const std::vector<std::size_t>& docs) {
  double total = 0.0;
  for (std::size_t n : docs) total += static_cast<double>(n);
  std::vector<double> out;
  for (std::size_t n : docs) out.push_back(std::log(static_cast<double>(n) / total));
  return out;
}

// Neumaier compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double err = 0.0;
  void add(double v) {
    const double t = sum + v;
    err += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

void MultinomialNB::fit(const Dataset& data) {
  classes_ = data.classes;
  dim_ = data.dimension;
  std::vector<std::size_t> docs;
  class_sums(data, log_prob_, docs);
  log_prior_ = log_priors(docs);
  const double smoothing = alpha_ * static_cast<double>(dim_);
  for (std::size_t c = 0; c < classes_; ++c) {
    double* row = log_prob_.data() + c * dim_;
    double total = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) total += row[j];
    const double log_denominator = std::log(total + smoothing);
    for (std::size_t j = 0; j < dim_; ++j) row[j] = std::log(row[j] + alpha_) - log_denominator;
  }
}

std::vector<double> MultinomialNB::scores(const SparseVector& x) const {
  std::vector<double> jll(log_prior_);
  for (std::size_t c = 0; c < classes_; ++c) {
    jll[c] += x.dot({log_prob_.data() + c * dim_, dim_});
  }
  to_log_posterior(jll);
  return jll;
}

Parameters MultinomialNB::parameters() const {
  return {{"class_log_prior", {classes_}, log_prior_}, {"feature_log_prob", {classes_, dim_}, log_prob_}};
}

void MultinomialNB::restore(const Parameters& params, std::size_t classes, std::size_t dimension) {
  classes_ = classes;
  dim_ = dimension;
  log_prior_ = require(params, "class_log_prior", {classes}).values;
  log_prob_ = require(params, "feature_log_prob", {classes, dimension}).values;
}

// ---------------------------------------------------------------------------

void ComplementNB::fit(const Dataset& data) {
  classes_ = data.classes;
  dim_ = data.dimension;
  std::vector<double> mass;
  std::vector<std::size_t> docs;
  class_sums(data, mass, docs);
  std::vector<double> all(dim_, 0.0);
  for (std::size_t c = 0; c < classes_; ++c) {
    for (std::size_t j = 0; j < dim_; ++j) all[j] += mass[c * dim_ + j];
  }
  weights_.assign(classes_ * dim_, 0.0);
  for (std::size_t c = 0; c < classes_; ++c) {
    double* row = weights_.data() + c * dim_;
    double total = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      row[j] = all[j] - mass[c * dim_ + j] + alpha_;
      total += row[j];
    }
    const double log_total = std::log(total);
    for (std::size_t j = 0; j < dim_; ++j) row[j] = log_total - std::log(row[j]);
  }
}

std::vector<double> ComplementNB::scores(const SparseVector& x) const {
  std::vector<double> jll(classes_);
  for (std::size_t c = 0; c < classes_; ++c) jll[c] = x.dot({weights_.data() + c * dim_, dim_});
  to_log_posterior(jll);
  return jll;
}

Parameters ComplementNB::parameters() const { return {{"complement_weights", {classes_, dim_}, weights_}}; }

void ComplementNB::restore(const Parameters& params, std::size_t classes, std::size_t dimension) {
  classes_ = classes;
  dim_ = dimension;
  weights_ = require(params, "complement_weights", {classes, dimension}).values;
}

// ---------------------------------------------------------------------------

void GaussianNB::fit(const Dataset& data) {
  classes_ = data.classes;
  dim_ = data.dimension;
  std::vector<std::size_t> docs;
  class_sums(data, mean_, docs);
  log_prior_ = log_priors(docs);
  for (std::size_t c = 0; c < classes_; ++c) {
    const double n = static_cast<double>(docs[c]);
    for (std::size_t j = 0; j < dim_; ++j) mean_[c * dim_ + j] /= n;
  }
  // Sum of squared deviations: implicit zeros contribute mean^2 each.
  var_.assign(classes_ * dim_, 0.0);
  for (std::size_t c = 0; c < classes_; ++c) {
    const double n = static_cast<double>(docs[c]);
    for (std::size_t j = 0; j < dim_; ++j) {
      const double m = mean_[c * dim_ + j];
      var_[c * dim_ + j] = n * m * m;
    }
  }
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const std::size_t c = data.targets[i];
    const auto& x = data.rows[i];
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      const std::size_t at = c * dim_ + x.indices[k];
      const double m = mean_[at];
      const double d = x.values[k] - m;
      var_[at] += d * d - m * m;
    }
  }
  for (std::size_t c = 0; c < classes_; ++c) {
    const double n = static_cast<double>(docs[c]);
    for (std::size_t j = 0; j < dim_; ++j) {
      double& v = var_[c * dim_ + j];
      v = std::max(std::max(v, 0.0) / n, var_floor_);
    }
  }
  precompute();
}

void GaussianNB::precompute() {
  zero_loglik_.assign(classes_, 0.0);
  zero_loglik_err_.assign(classes_, 0.0);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  for (std::size_t c = 0; c < classes_; ++c) {
    CompensatedSum s{log_prior_[c]};
    for (std::size_t j = 0; j < dim_; ++j) {
      const double m = mean_[c * dim_ + j];
      const double v = var_[c * dim_ + j];
      s.add(-0.5 * (log_two_pi + std::log(v)));
      s.add(-(m * m / (2.0 * v)));
    }
    zero_loglik_[c] = s.sum;
    zero_loglik_err_[c] = s.err;
  }
}

std::vector<double> GaussianNB::scores(const SparseVector& x) const {
  std::vector<double> jll(zero_loglik_);
  for (std::size_t c = 0; c < classes_; ++c) {
    // Swap each nonzero coordinate's zero-vector term for its actual term. The
    // removed term is bit-identical to the one summed in precompute().
    CompensatedSum s{zero_loglik_[c], zero_loglik_err_[c]};
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      const std::size_t at = c * dim_ + x.indices[k];
      const double m = mean_[at];
      const double v = var_[at];
      const double d = x.values[k] - m;
      s.add(m * m / (2.0 * v));
      s.add(-(d * d / (2.0 * v)));
    }
    jll[c] = s.sum + s.err;
  }
  to_log_posterior(jll);
  return jll;
}

Parameters GaussianNB::parameters() const {
  return {{"class_log_prior", {classes_}, log_prior_},
          {"mean", {classes_, dim_}, mean_},
          {"variance", {classes_, dim_}, var_}};
}

void GaussianNB::restore(const Parameters& params, std::size_t classes, std::size_t dimension) {
  classes_ = classes;
  dim_ = dimension;
  log_prior_ = require(params, "class_log_prior", {classes}).values;
  mean_ = require(params, "mean", {classes, dimension}).values;
  var_ = require(params, "variance", {classes, dimension}).values;
  for (double v : var_) {
    if (!(v > 0.0)) throw ModelFormatError("non-positive variance in Gaussian NB parameters");
  }
  precompute();
}

}  // namespace isaid::classify::detail
