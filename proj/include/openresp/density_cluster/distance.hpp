#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "openresp/embeddings/matrix.hpp"
#include "openresp/error.hpp"
#include "openresp/parallel.hpp"

namespace openresp::density_cluster {

// Condensed upper-triangular Euclidean distance matrix. Each entry is summed
// in coordinate order, so results do not depend on the thread count.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  static DistanceMatrix euclidean(const embeddings::EmbeddingMatrix& x, unsigned threads = 1) {
    DistanceMatrix d;
    d.n_ = x.size();
    d.values_.resize(d.n_ < 2 ? 0 : d.n_ * (d.n_ - 1) / 2);
    parallel_for(d.n_, threads, [&](std::size_t i) {
      auto a = x.row(i);
      for (std::size_t j = i + 1; j < d.n_; ++j) {
        auto b = x.row(j);
        double ss = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
          const double t = a[k] - b[k];
          ss += t * t;
        }
        d.values_[d.index(i, j)] = std::sqrt(ss);
      }
    });
    for (double v : d.values_)
      if (!std::isfinite(v)) throw ComputationError("non-finite pairwise distance");
    return d;
  }

  // From explicit points (row-major, `dim` columns); used by tests and small inputs.
  static DistanceMatrix from_points(const std::vector<std::vector<double>>& pts) {
    embeddings::EmbeddingMatrix m(pts.empty() ? 1 : pts.front().size());
    for (std::size_t i = 0; i < pts.size(); ++i) m.add_row(std::to_string(i), pts[i]);
    return euclidean(m);
  }

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    return i < j ? values_[index(i, j)] : values_[index(j, i)];
  }

  // Row i's distances to the k nearest other points, ascending.
  std::vector<double> nearest(std::size_t i, std::size_t k) const {
    std::vector<double> row;
    row.reserve(n_ - 1);
    for (std::size_t j = 0; j < n_; ++j)
      if (j != i) row.push_back((*this)(i, j));
    k = std::min(k, row.size());
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end());
    row.resize(k);
    return row;
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n_ - i * (i + 1) / 2 + (j - i - 1); }

  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Sorted distances to the `k_max` nearest neighbours of every point, so core
// distances for any min_samples <= k_max + 1 can be read off without a rescan.
class NeighbourTable {
 public:
  NeighbourTable(const DistanceMatrix& d, std::size_t k_max, unsigned threads = 1)
      : k_(std::min(k_max, d.size() == 0 ? 0 : d.size() - 1)), rows_(d.size()) {
    parallel_for(d.size(), threads, [&](std::size_t i) { rows_[i] = d.nearest(i, k_); });
  }

  // Core distance with the point itself counted as its own first neighbour:
  // min_samples = 1 gives 0, min_samples = 2 the nearest other point, ...
  std::vector<double> core_distances(std::size_t min_samples) const {
    if (min_samples == 0 || min_samples > k_ + 1) throw ConfigError("min_samples out of range for neighbour table");
    std::vector<double> core(rows_.size(), 0.0);
    if (min_samples == 1) return core;
    for (std::size_t i = 0; i < rows_.size(); ++i) core[i] = rows_[i][min_samples - 2];
    return core;
  }

 private:
  std::size_t k_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace openresp::density_cluster
