#include "classifiers.hpp"

#include "isaid/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isaid::classify::detail {

void KNearest::fit(const Dataset& data) {
  classes_ = data.classes;
  dim_ = data.dimension;
  rows_ = data.rows;
  targets_ = data.targets;
  index();
}

void KNearest::index() {
  postings_.assign(dim_, {});
  row_norms_.resize(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      postings_[r.indices[k]].emplace_back(static_cast<std::uint32_t>(i), r.values[k]);
    }
    row_norms_[i] = r.squared_norm();
  }
}

std::vector<double> KNearest::scores(const SparseVector& x) const {
  std::vector<std::pair<double, std::size_t>> dist(rows_.size());
  std::vector<double> nearest(classes_, std::numeric_limits<double>::infinity());
  std::vector<double> dots(rows_.size(), 0.0);
  for (std::size_t k = 0; k < x.nnz(); ++k) {
    if (x.indices[k] >= postings_.size()) continue;
    const double v = x.values[k];
    for (const auto& [row, w] : postings_[x.indices[k]]) dots[row] += v * w;
  }
  const double x_norm = x.squared_norm();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    // Norm expansion can dip just below zero for near-duplicates.
    const double d2 = std::max(0.0, x_norm + row_norms_[i] - 2.0 * dots[i]);
    dist[i] = {std::sqrt(d2), i};
    nearest[targets_[i]] = std::min(nearest[targets_[i]], dist[i].first);
  }
  // Equal distances resolve by training order.
  const std::size_t k = std::min(k_, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  std::vector<std::size_t> votes(classes_, 0);
  std::vector<double> dist_sum(classes_, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t c = targets_[dist[i].second];
    ++votes[c];
    dist_sum[c] += dist[i].first;
  }
  const auto squash = [](double d) { return std::isinf(d) ? 1.0 : d / (1.0 + d); };
  std::vector<double> out(classes_);
  for (std::size_t c = 0; c < classes_; ++c) {
    if (votes[c] > 0) {
      out[c] = static_cast<double>(votes[c]) - squash(dist_sum[c] / static_cast<double>(votes[c]));
    } else {
      out[c] = -squash(nearest[c]);
    }
  }
  return out;
}

Parameters KNearest::parameters() const {
  ParameterArray row_ptr{"row_ptr", {rows_.size() + 1}, {0.0}};
  ParameterArray indices{"indices", {0}, {}};
  ParameterArray values{"values", {0}, {}};
  for (const auto& r : rows_) {
    indices.values.insert(indices.values.end(), r.indices.begin(), r.indices.end());
    values.values.insert(values.values.end(), r.values.begin(), r.values.end());
    row_ptr.values.push_back(static_cast<double>(indices.values.size()));
  }
  indices.shape[0] = indices.values.size();
  values.shape[0] = values.values.size();
  ParameterArray targets{"targets", {targets_.size()}, {targets_.begin(), targets_.end()}};
  return {std::move(row_ptr), std::move(indices), std::move(values), std::move(targets)};
}

void KNearest::restore(const Parameters& params, std::size_t classes, std::size_t dimension) {
  classes_ = classes;
  dim_ = dimension;
  auto find = [&](std::string_view name) -> const ParameterArray& {
    for (const auto& p : params) {
      if (p.name == name) {
        if (p.shape.size() != 1) break;
        return require(params, name, p.shape);
      }
    }
    throw ModelFormatError("missing or malformed parameter '" + std::string(name) + "'");
  };
  const auto& row_ptr = find("row_ptr").values;
  if (row_ptr.empty()) throw ModelFormatError("empty k-NN row pointer array");
  const auto& indices = find("indices").values;
  const auto& values = require(params, "values", {indices.size()}).values;
  const auto& targets = require(params, "targets", {row_ptr.size() - 1}).values;
  rows_.assign(row_ptr.size() - 1, {});
  targets_.assign(targets.size(), 0);
  for (std::size_t r = 0; r + 1 < row_ptr.size(); ++r) {
    const auto begin = static_cast<std::size_t>(row_ptr[r]);
    const auto end = static_cast<std::size_t>(row_ptr[r + 1]);
    if (begin > end || end > indices.size()) throw ModelFormatError("corrupt k-NN row pointers");
    auto& row = rows_[r];
    row.dimension = dimension;
    for (std::size_t k = begin; k < end; ++k) {
      const double idx = indices[k];
      if (idx < 0 || idx >= static_cast<double>(dimension)) throw ModelFormatError("k-NN feature index out of range");
      row.indices.push_back(static_cast<std::uint32_t>(idx));
      row.values.push_back(values[k]);
    }
    const double t = targets[r];
    if (t < 0 || t >= static_cast<double>(classes)) throw ModelFormatError("k-NN target out of range");
    targets_[r] = static_cast<std::size_t>(t);
  }
  index();
}

}  // namespace isaid::classify::detail
