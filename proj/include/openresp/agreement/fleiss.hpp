#pragma once

#include <cstddef>
#include <vector>

#include "openresp/agreement/ratings.hpp"
#include "openresp/error.hpp"

namespace openresp::agreement {

// Fleiss' kappa:
//   P_i  = (sum_j n_ij^2 - n) / (n (n - 1))
//   Pbar = mean_i P_i
//   p_j  = sum_i n_ij / (N n),  Pe = sum_j p_j^2
//   kappa = (Pbar - Pe) / (1 - Pe)
// Unanimous ratings on every item give exactly 1, covering the Pe == 1 limit.
inline double fleiss_kappa(const RatingMatrix& m) {
  m.validate();
  const std::size_t n_items = m.counts.size();
  if (n_items < 2) throw ComputationError("Fleiss' kappa needs at least two items, got " + std::to_string(n_items));
  const double n = static_cast<double>(m.n_raters);
  std::vector<double> col(m.labels.size(), 0.0);
  double p_bar = 0.0;
  bool unanimous = true;
  for (const auto& row : m.counts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double c = static_cast<double>(row[j]);
      sq += c * c;
      col[j] += c;
      if (row[j] != 0 && row[j] != m.n_raters) unanimous = false;
    }
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  if (unanimous) return 1.0;
  p_bar /= static_cast<double>(n_items);
  double p_e = 0.0;
  for (double c : col) {
    const double p = c / (static_cast<double>(n_items) * n);
    p_e += p * p;
  }
  if (p_e >= 1.0) throw ComputationError("degenerate chance agreement with non-unanimous ratings");
  return (p_bar - p_e) / (1.0 - p_e);
}

inline std::size_t perfect_agreement_count(const RatingMatrix& m) {
  std::size_t k = 0;
  for (const auto& row : m.counts)
    for (auto c : row)
      if (c == m.n_raters) ++k;
  return k;
}

}  // namespace openresp::agreement
