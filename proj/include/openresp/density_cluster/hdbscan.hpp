#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "openresp/density_cluster/distance.hpp"
#include "openresp/error.hpp"

namespace openresp::density_cluster {

struct MstEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0.0;
};

// Single-linkage merge: node n + k is created by merging `left` and `right`.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;
  std::size_t size = 0;
};

// Condensed tree row. Clusters are numbered from n (the root); children
// below n are individual points falling out of `parent` at `lambda`.
struct CondensedRow {
  std::size_t parent = 0;
  std::size_t child = 0;
  double lambda = 0.0;
  std::size_t child_size = 0;
};

struct HdbscanParams {
  std::size_t min_cluster_size = 5;
  std::optional<std::size_t> min_samples;  // defaults to min_cluster_size
  bool allow_single_cluster = false;
};

struct ClusterResult {
  std::vector<int> labels;  // -1 marks an outlier
  std::size_t n_clusters = 0;
  std::vector<CondensedRow> condensed_tree;
  std::map<std::size_t, double> stabilities;  // tree cluster id -> stability
  std::vector<std::size_t> selected;          // tree cluster ids, in canonical label order
  std::vector<MstEdge> mst;
  std::size_t min_cluster_size = 0;
  std::size_t min_samples = 0;

  std::size_t outlier_count() const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), -1));
  }
};

inline double mutual_reachability(const DistanceMatrix& d, const std::vector<double>& core, std::size_t a,
                                  std::size_t b) noexcept {
  return std::max({core[a], core[b], d(a, b)});
}

// Exact MST of the mutual-reachability graph by dense Prim from vertex 0.
// Ties on weight go to the lexicographically smaller (min, max) index pair.
inline std::vector<MstEdge> prim_mst(const DistanceMatrix& d, const std::vector<double>& core) {
  const std::size_t n = d.size();
  std::vector<MstEdge> out;
  if (n < 2) return out;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, inf);
  std::vector<std::size_t> from(n, 0);
  auto pair_less = [](std::size_t a1, std::size_t b1, std::size_t a2, std::size_t b2) {
    const auto lo1 = std::min(a1, b1), hi1 = std::max(a1, b1);
    const auto lo2 = std::min(a2, b2), hi2 = std::max(a2, b2);
    return lo1 != lo2 ? lo1 < lo2 : hi1 < hi2;
  };
  std::size_t cur = 0;
  in_tree[0] = 1;
  out.reserve(n - 1);
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double w = mutual_reachability(d, core, cur, v);
      if (w < best[v] || (w == best[v] && pair_less(cur, v, from[v], v))) {
        best[v] = w;
        from[v] = cur;
      }
      if (pick == n || best[v] < best[pick] ||
          (best[v] == best[pick] && pair_less(from[v], v, from[pick], pick)))
        pick = v;
    }
    in_tree[pick] = 1;
    out.push_back({std::min(from[pick], pick), std::max(from[pick], pick), best[pick]});
    cur = pick;
  }
  return out;
}

// Single-linkage dendrogram from MST edges sorted by (weight, a, b).
inline std::vector<Merge> single_linkage(std::vector<MstEdge> mst, std::size_t n) {
  std::sort(mst.begin(), mst.end(), [](const MstEdge& x, const MstEdge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  std::vector<std::size_t> parent(2 * n - 1), size(2 * n - 1, 1);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    std::size_t r = x;
    while (parent[r] != r) r = parent[r];
    while (parent[x] != r) {
      const std::size_t next = parent[x];
      parent[x] = r;
      x = next;
    }
    return r;
  };
  std::vector<Merge> out;
  out.reserve(mst.size());
  std::size_t next = n;
  for (const auto& e : mst) {
    const std::size_t ra = find(e.a), rb = find(e.b);
    size[next] = size[ra] + size[rb];
    out.push_back({ra, rb, e.weight, size[next]});
    parent[ra] = parent[rb] = next;
    ++next;
  }
  return out;
}

// lambda = 1 / distance. A zero-distance merge (identical points) inherits
// the lambda of its nearest positive-distance ancestor, so a group of
// duplicates dissolves at the moment it separates and carries no stability
// of its own. If every merge is at distance zero, lambda is 1.
inline std::vector<double> merge_lambdas(const std::vector<Merge>& merges) {
  const std::size_t n = merges.size() + 1;
  std::vector<std::size_t> parent(merges.size(), merges.size());
  for (std::size_t k = 0; k < merges.size(); ++k) {
    if (merges[k].left >= n) parent[merges[k].left - n] = k;
    if (merges[k].right >= n) parent[merges[k].right - n] = k;
  }
  std::vector<double> out(merges.size(), 1.0);
  for (std::size_t k = merges.size(); k-- > 0;) {
    if (merges[k].distance > 0.0)
      out[k] = 1.0 / merges[k].distance;
    else if (parent[k] < merges.size())
      out[k] = out[parent[k]];
  }
  return out;
}

// Condensed tree. All merges at the same lambda are treated as one
// simultaneous split, so the result does not depend on how ties were ordered
// in the dendrogram. At a split, parts with >= min_cluster_size points become
// child clusters when there are at least two of them; a single large part
// keeps the parent's label; points in small parts fall out at that lambda.
// Cluster labels start at n for the root and grow breadth-first.
inline std::vector<CondensedRow> condense_tree(const std::vector<Merge>& merges, std::size_t n,
                                               std::size_t min_cluster_size) {
  std::vector<CondensedRow> out;
  if (n < 2) return out;
  const std::size_t root = 2 * n - 2;
  const auto lambdas = merge_lambdas(merges);
  auto node_size = [&](std::size_t node) { return node < n ? std::size_t{1} : merges[node - n].size; };

  auto points_under = [&](std::size_t node) {
    std::vector<std::size_t> pts, stack{node};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      if (x < n) {
        pts.push_back(x);
      } else {
        stack.push_back(merges[x - n].right);
        stack.push_back(merges[x - n].left);
      }
    }
    return pts;
  };

  std::vector<std::pair<std::size_t, std::size_t>> queue{{root, n}};  // (dendrogram node, label)
  std::size_t next_label = n + 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [node, label] = queue[q];
    const double lambda = lambdas[node - n];
    std::vector<std::size_t> parts, stack{node};
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      if (x >= n && lambdas[x - n] == lambda) {
        stack.push_back(merges[x - n].right);
        stack.push_back(merges[x - n].left);
      } else {
        parts.push_back(x);
      }
    }
    std::size_t big = 0;
    for (auto x : parts) big += node_size(x) >= min_cluster_size;
    for (auto x : parts) {
      const std::size_t sz = node_size(x);
      if (sz < min_cluster_size) {
        for (auto p : points_under(x)) out.push_back({label, p, lambda, 1});
      } else if (big == 1) {
        queue.emplace_back(x, label);
      } else {
        out.push_back({label, next_label, lambda, sz});
        queue.emplace_back(x, next_label++);
      }
    }
  }
  return out;
}

// stability(C) = sum over points p in C of (lambda_p - lambda_birth(C)), where
// a point leaves C either on its own or inside a child cluster.
inline std::map<std::size_t, double> compute_stability(const std::vector<CondensedRow>& tree, std::size_t n) {
  std::map<std::size_t, double> birth, stability;
  birth[n] = 0.0;
  for (const auto& r : tree)
    if (r.child >= n) birth[r.child] = r.lambda;
  for (const auto& [c, _] : birth) stability[c] = 0.0;
  for (const auto& r : tree) stability[r.parent] += (r.lambda - birth[r.parent]) * static_cast<double>(r.child_size);
  return stability;
}

// Excess-of-mass selection. Returns the selected tree cluster ids, ascending.
inline std::vector<std::size_t> select_clusters(const std::vector<CondensedRow>& tree,
                                                const std::map<std::size_t, double>& stability, std::size_t n,
                                                bool allow_single_cluster) {
  std::map<std::size_t, std::vector<std::size_t>> cluster_children;
  for (const auto& r : tree)
    if (r.child >= n) cluster_children[r.parent].push_back(r.child);
  std::map<std::size_t, double> score = stability;
  std::map<std::size_t, bool> is_cluster;
  for (const auto& [c, _] : stability) is_cluster[c] = true;

  auto unselect_descendants = [&](std::size_t c) {
    std::vector<std::size_t> stack(cluster_children[c]);
    while (!stack.empty()) {
      const std::size_t s = stack.back();
      stack.pop_back();
      is_cluster[s] = false;
      for (auto k : cluster_children[s]) stack.push_back(k);
    }
  };

  // Children always carry larger ids than their parent.
  for (auto it = score.rbegin(); it != score.rend(); ++it) {
    const std::size_t c = it->first;
    if (c == n && !allow_single_cluster) {
      is_cluster[c] = false;
      continue;
    }
    double child_sum = 0.0;
    for (auto k : cluster_children[c]) child_sum += score[k];
    if (child_sum > it->second) {
      is_cluster[c] = false;
      it->second = child_sum;
    } else {
      unselect_descendants(c);
    }
  }
  std::vector<std::size_t> out;
  for (const auto& [c, sel] : is_cluster)
    if (sel) out.push_back(c);
  return out;
}

// Full HDBSCAN on a precomputed distance matrix; `neighbours` must cover
// min_samples - 1 neighbours per point.
inline ClusterResult hdbscan(const DistanceMatrix& d, const NeighbourTable& neighbours, const HdbscanParams& params) {
  const std::size_t n = d.size();
  const std::size_t mcs = params.min_cluster_size;
  const std::size_t ms = params.min_samples.value_or(mcs);
  if (n < 2) throw DataError("HDBSCAN needs at least 2 points");
  if (mcs < 2) throw ConfigError("min_cluster_size must be >= 2");
  ClusterResult res;
  res.min_cluster_size = mcs;
  res.min_samples = ms;
  res.labels.assign(n, -1);
  if (n < mcs) return res;  // nothing can form a cluster
  if (ms < 1) throw ConfigError("min_samples must be >= 1");
  if (n < ms + 1)
    throw DataError("HDBSCAN with min_samples=" + std::to_string(ms) + " needs at least " + std::to_string(ms + 1) +
                    " points, got " + std::to_string(n));

  const auto core = neighbours.core_distances(ms);
  res.mst = prim_mst(d, core);
  const auto merges = single_linkage(res.mst, n);
  res.condensed_tree = condense_tree(merges, n, mcs);
  res.stabilities = compute_stability(res.condensed_tree, n);
  auto selected = select_clusters(res.condensed_tree, res.stabilities, n, params.allow_single_cluster);

  std::map<std::size_t, std::size_t> parent_of;  // tree node -> parent cluster
  for (const auto& r : res.condensed_tree) parent_of[r.child] = r.parent;
  std::map<std::size_t, int> raw_label;
  for (std::size_t k = 0; k < selected.size(); ++k) raw_label[selected[k]] = static_cast<int>(k);
  std::vector<int> raw(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    auto it = parent_of.find(p);
    if (it == parent_of.end()) continue;
    for (std::size_t c = it->second;;) {
      if (auto s = raw_label.find(c); s != raw_label.end()) {
        raw[p] = s->second;
        break;
      }
      auto up = parent_of.find(c);
      if (up == parent_of.end()) break;
      c = up->second;
    }
  }

  // Canonical numbering: clusters ordered by their smallest member index.
  std::vector<int> remap(selected.size(), -1);
  int next = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (raw[p] >= 0 && remap[static_cast<std::size_t>(raw[p])] < 0) remap[static_cast<std::size_t>(raw[p])] = next++;
  res.selected.assign(static_cast<std::size_t>(next), 0);
  for (std::size_t k = 0; k < selected.size(); ++k)
    if (remap[k] >= 0) res.selected[static_cast<std::size_t>(remap[k])] = selected[k];
  for (std::size_t p = 0; p < n; ++p) res.labels[p] = raw[p] < 0 ? -1 : remap[static_cast<std::size_t>(raw[p])];
  res.n_clusters = static_cast<std::size_t>(next);
  return res;
}

inline ClusterResult hdbscan(const DistanceMatrix& d, const HdbscanParams& params) {
  const std::size_t ms = params.min_samples.value_or(params.min_cluster_size);
  NeighbourTable nt(d, ms > 1 ? ms - 1 : 0);
  return hdbscan(d, nt, params);
}

inline ClusterResult hdbscan(const embeddings::EmbeddingMatrix& vectors, const HdbscanParams& params,
                             unsigned threads = 1) {
  return hdbscan(DistanceMatrix::euclidean(vectors, threads), params);
}

// Debug dump: parent,child,lambda,size per row.
inline std::string condensed_tree_csv(const ClusterResult& r) {
  std::string out = "parent,child,lambda,size\n";
  char buf[64];
  for (const auto& row : r.condensed_tree) {
    auto res = std::to_chars(buf, buf + sizeof buf, row.lambda);
    out += std::to_string(row.parent) + "," + std::to_string(row.child) + "," + std::string(buf, res.ptr) + "," +
           std::to_string(row.child_size) + "\n";
  }
  return out;
}

}  // namespace openresp::density_cluster
