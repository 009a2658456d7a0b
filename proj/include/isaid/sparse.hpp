#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace isaid {

/// Sparse real vector with strictly increasing indices. Explicit zeros are
/// never stored.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dimension = 0;

  std::size_t nnz() const noexcept { return indices.size(); }

  std::vector<double> to_dense() const {
    std::vector<double> out(dimension, 0.0);
    for (std::size_t i = 0; i < indices.size(); ++i) out[indices[i]] = values[i];
    return out;
  }

  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector v;
    v.dimension = dense.size();
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 0.0) {
        v.indices.push_back(static_cast<std::uint32_t>(i));
        v.values.push_back(dense[i]);
      }
    }
    return v;
  }

  double squared_norm() const noexcept {
    double s = 0.0;
    for (double x : values) s += x * x;
    return s;
  }

  void scale(double factor) noexcept {
    for (double& x : values) x *= factor;
  }

  /// Dot product with a dense row.
  double dot(std::span<const double> dense) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < indices.size(); ++i) s += values[i] * dense[indices[i]];
    return s;
  }
};

/// Squared Euclidean distance, computed over the union of supports.
inline double squared_distance(const SparseVector& a, const SparseVector& b) noexcept {
  double s = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    double d;
    if (j == b.nnz() || (i < a.nnz() && a.indices[i] < b.indices[j])) {
      d = a.values[i++];
    } else if (i == a.nnz() || b.indices[j] < a.indices[i]) {
      d = b.values[j++];
    } else {
      d = a.values[i++] - b.values[j++];
    }
    s += d * d;
  }
  return s;
}

}  // namespace isaid
