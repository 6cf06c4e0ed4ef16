#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "openresp/error.hpp"
#include "openresp/hash.hpp"

namespace openresp::topic_compare {

enum class RankMode {
  union_tied,    // union of both lists; words missing from a list share its average tail rank
  intersection,  // shared words only, re-ranked within each list
};

enum class PValueMethod { t_approximation, permutation };

struct SpearmanOptions {
  RankMode mode = RankMode::union_tied;
  PValueMethod p_method = PValueMethod::t_approximation;
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  std::size_t max_words = 100;
};

struct SpearmanResult {
  double rho = 0.0;
  std::optional<double> p;
  std::size_t n_union = 0;  // number of ranked words (the intersection size in intersection mode)
};

// Pearson correlation, summed in index order. Identical vectors give exactly 1.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  if (x == y) return 1.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Two-sided p for a correlation of n pairs via t = rho sqrt((n-2)/(1-rho^2))
// with a Student-t at n-2 degrees of freedom: p = I_{df/(df+t^2)}(df/2, 1/2).
inline std::optional<double> correlation_p_value(double rho, std::size_t n) {
  if (std::abs(rho) >= 1.0) return 0.0;
  if (n < 4) return std::nullopt;
  const double df = static_cast<double>(n - 2);
  const double t2 = rho * rho * df / (1.0 - rho * rho);
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t2));
}

struct RankVectors {
  std::vector<double> a;
  std::vector<double> b;
};

inline RankVectors rank_vectors(const std::vector<std::string>& list_a, const std::vector<std::string>& list_b,
                                RankMode mode) {
  std::map<std::string_view, std::size_t> pos_a, pos_b;
  for (std::size_t i = 0; i < list_a.size(); ++i)
    if (!pos_a.emplace(list_a[i], i).second) throw DataError("duplicate word '" + list_a[i] + "' in ranked list");
  for (std::size_t i = 0; i < list_b.size(); ++i)
    if (!pos_b.emplace(list_b[i], i).second) throw DataError("duplicate word '" + list_b[i] + "' in ranked list");

  RankVectors r;
  if (mode == RankMode::intersection) {
    std::vector<std::size_t> shared_in_a;  // positions in a of shared words
    for (std::size_t i = 0; i < list_a.size(); ++i)
      if (pos_b.contains(list_a[i])) shared_in_a.push_back(i);
    // re-rank within b
    std::vector<std::size_t> b_positions;
    for (auto i : shared_in_a) b_positions.push_back(pos_b[list_a[i]]);
    std::vector<std::size_t> sorted = b_positions;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < shared_in_a.size(); ++k) {
      r.a.push_back(static_cast<double>(k + 1));
      auto rank_b = std::lower_bound(sorted.begin(), sorted.end(), b_positions[k]) - sorted.begin();
      r.b.push_back(static_cast<double>(rank_b + 1));
    }
    return r;
  }

  std::vector<std::string_view> uni(list_a.begin(), list_a.end());
  for (const auto& w : list_b)
    if (!pos_a.contains(w)) uni.push_back(w);
  const std::size_t absent_a = uni.size() - list_a.size(), absent_b = uni.size() - list_b.size();
  const double tail_a = (static_cast<double>(list_a.size() + 1) + static_cast<double>(list_a.size() + absent_a)) / 2.0;
  const double tail_b = (static_cast<double>(list_b.size() + 1) + static_cast<double>(list_b.size() + absent_b)) / 2.0;
  for (auto w : uni) {
    auto ia = pos_a.find(w), ib = pos_b.find(w);
    r.a.push_back(ia == pos_a.end() ? tail_a : static_cast<double>(ia->second + 1));
    r.b.push_back(ib == pos_b.end() ? tail_b : static_cast<double>(ib->second + 1));
  }
  return r;
}

// Spearman's rho between two score-ordered word lists (top max_words each).
inline SpearmanResult spearman_top100(std::vector<std::string> list_a, std::vector<std::string> list_b,
                                      const SpearmanOptions& opt = {}) {
  if (list_a.empty() || list_b.empty()) throw DataError("spearman_top100: empty word list");
  if (list_a.size() > opt.max_words) list_a.resize(opt.max_words);
  if (list_b.size() > opt.max_words) list_b.resize(opt.max_words);
  const auto rv = rank_vectors(list_a, list_b, opt.mode);
  SpearmanResult r;
  r.n_union = rv.a.size();
  if (r.n_union == 0) return r;
  r.rho = r.n_union == 1 ? 1.0 : pearson(rv.a, rv.b);
  if (opt.p_method == PValueMethod::t_approximation || std::abs(r.rho) >= 1.0 || r.n_union < 4) {
    r.p = correlation_p_value(r.rho, r.n_union);
    return r;
  }
  // Monte Carlo permutation test on the b ranks (Fisher-Yates, splitmix64).
  SplitMix64 rng(opt.seed);
  std::vector<double> perm = rv.b;
  std::size_t extreme = 0;
  const double obs = std::abs(r.rho);
  for (std::size_t k = 0; k < opt.permutations; ++k) {
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    if (std::abs(pearson(rv.a, perm)) >= obs - 1e-12) ++extreme;
  }
  r.p = (static_cast<double>(extreme) + 1.0) / (static_cast<double>(opt.permutations) + 1.0);
  return r;
}

inline bool classify_pair(double rho, std::optional<double> p, double rho_threshold = 0.7,
                          double p_threshold = 0.05) noexcept {
  return rho >= rho_threshold && p && *p < p_threshold;
}

}  // namespace openresp::topic_compare
