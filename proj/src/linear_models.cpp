#include "classifiers.hpp"

#include "isaid/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isaid::classify::detail {

std::vector<double> LinearWeights::decision(const SparseVector& x) const {
  std::vector<double> out(classes, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    out[c] = x.dot({w.data() + c * dim, dim});
    if (!bias.empty()) out[c] += bias[c];
  }
  return out;
}

Parameters LinearWeights::to_parameters() const {
  Parameters out{{"weights", {classes, dim}, w}};
  if (!bias.empty()) out.push_back({"bias", {classes}, bias});
  return out;
}

void LinearWeights::from_parameters(const Parameters& params, std::size_t c, std::size_t d, bool with_bias) {
  classes = c;
  dim = d;
  w = require(params, "weights", {c, d}).values;
  bias = with_bias ? require(params, "bias", {c}).values : std::vector<double>{};
}

namespace {

std::vector<std::size_t> epoch_order(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(std::span(order), rng);
  return order;
}

void axpy(double a, const SparseVector& x, double* row) {
  for (std::size_t k = 0; k < x.nnz(); ++k) row[x.indices[k]] += a * x.values[k];
}

}  // namespace

// ---------------------------------------------------------------------------

void AveragedPerceptron::fit(const Dataset& data) {
  const std::size_t C = data.classes;
  const std::size_t D = data.dimension;
  model_ = {C, D, std::vector<double>(C * D, 0.0), std::vector<double>(C, 0.0)};
  // Running weights plus counter-weighted update sums; the average is
  // w - u / counter.
  std::vector<double> u(C * D, 0.0);
  std::vector<double> ub(C, 0.0);
  double counter = 1.0;
  SplitMix64 rng(seed_);
  for (std::size_t epoch = 0; epoch < epochs_; ++epoch) {
    for (std::size_t i : epoch_order(data.rows.size(), rng)) {
      const auto& x = data.rows[i];
      const std::size_t y = data.targets[i];
      const std::size_t guess = argmax(model_.decision(x));
      if (guess != y) {
        axpy(1.0, x, model_.w.data() + y * D);
        axpy(-1.0, x, model_.w.data() + guess * D);
        axpy(counter, x, u.data() + y * D);
        axpy(-counter, x, u.data() + guess * D);
        model_.bias[y] += 1.0;
        model_.bias[guess] -= 1.0;
        ub[y] += counter;
        ub[guess] -= counter;
      }
      counter += 1.0;
    }
  }
  for (std::size_t j = 0; j < C * D; ++j) model_.w[j] -= u[j] / counter;
  for (std::size_t c = 0; c < C; ++c) model_.bias[c] -= ub[c] / counter;
}

// ---------------------------------------------------------------------------

void SoftmaxRegression::fit(const Dataset& data) {
  const std::size_t C = data.classes;
  const std::size_t D = data.dimension;
  const std::size_t n = data.rows.size();
  // Weights are scale * v so the L2 shrink is O(1) per step.
  std::vector<double> v(C * D, 0.0);
  double scale = 1.0;
  SplitMix64 rng(seed_);
  std::vector<double> residuals;
  for (std::size_t epoch = 0; epoch < epochs_; ++epoch) {
    const auto order = epoch_order(n, rng);
    for (std::size_t start = 0; start < n; start += batch_) {
      const std::size_t end = std::min(n, start + batch_);
      residuals.assign((end - start) * C, 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const auto& x = data.rows[order[b]];
        double* r = residuals.data() + (b - start) * C;
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < C; ++c) {
          r[c] = scale * x.dot({v.data() + c * D, D});
          top = std::max(top, r[c]);
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < C; ++c) sum += (r[c] = std::exp(r[c] - top));
        for (std::size_t c = 0; c < C; ++c) r[c] /= sum;
        r[data.targets[order[b]]] -= 1.0;
      }
      scale *= 1.0 - rate_ * l2_;
      const double step = -rate_ / (static_cast<double>(end - start) * scale);
      for (std::size_t b = start; b < end; ++b) {
        const auto& x = data.rows[order[b]];
        const double* r = residuals.data() + (b - start) * C;
        for (std::size_t c = 0; c < C; ++c) axpy(step * r[c], x, v.data() + c * D);
      }
      if (scale < 1e-6) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }
  for (double& w : v) w *= scale;
  model_ = {C, D, std::move(v), {}};
}

// ---------------------------------------------------------------------------

void LinearSvm::fit(const Dataset& data) {
  const std::size_t C = data.classes;
  const std::size_t D = data.dimension;
  std::vector<double> v(C * D, 0.0);
  std::vector<double> scale(C, 1.0);
  std::vector<double> v_sq(C, 0.0);  // squared norm of each v row
  const double radius_sq = 1.0 / lambda_;
  SplitMix64 rng(seed_);
  double t = 0.0;
  for (std::size_t epoch = 0; epoch < epochs_; ++epoch) {
    for (std::size_t i : epoch_order(data.rows.size(), rng)) {
      const auto& x = data.rows[i];
      const double x_sq = x.squared_norm();
      t += 1.0;
      const double eta = 1.0 / (lambda_ * t);
      const double shrink = 1.0 - eta * lambda_;
      for (std::size_t c = 0; c < C; ++c) {
        double* row = v.data() + c * D;
        const double y = data.targets[i] == c ? 1.0 : -1.0;
        const double vx = x.dot({row, D});
        const double margin = y * scale[c] * vx;
        if (shrink <= 0.0) {
          std::fill(row, row + D, 0.0);
          scale[c] = 1.0;
          v_sq[c] = 0.0;
        } else {
          scale[c] *= shrink;
        }
        if (margin < 1.0) {
          const double a = eta * y / scale[c];
          const double current_vx = shrink <= 0.0 ? 0.0 : vx;
          axpy(a, x, row);
          v_sq[c] += 2.0 * a * current_vx + a * a * x_sq;
        }
        const double norm_sq = scale[c] * scale[c] * v_sq[c];
        if (norm_sq > radius_sq) scale[c] *= std::sqrt(radius_sq / norm_sq);
        if (scale[c] < 1e-6) {
          for (std::size_t j = 0; j < D; ++j) row[j] *= scale[c];
          v_sq[c] *= scale[c] * scale[c];
          scale[c] = 1.0;
        }
      }
    }
  }
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t j = 0; j < D; ++j) v[c * D + j] *= scale[c];
  }
  model_ = {C, D, std::move(v), {}};
}

}  // namespace isaid::classify::detail
