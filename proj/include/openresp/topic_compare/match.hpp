#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openresp/error.hpp"
#include "openresp/hash.hpp"
#include "openresp/parallel.hpp"
#include "openresp/topic_compare/spearman.hpp"
#include "openresp/topics/model.hpp"

namespace openresp::topic_compare {

struct CompareConfig {
  double rho_threshold = 0.7;
  double p_threshold = 0.05;
  SpearmanOptions spearman;
  unsigned threads = 1;
};

struct TopicPair {
  int topic_a = 0;
  int topic_b = 0;
  double rho = 0.0;
  std::optional<double> p;
  std::size_t n_union = 0;
  bool similar = false;
};

struct TopicMatchReport {
  std::vector<TopicPair> pairs;    // every cross-model pair, a-major order
  std::vector<TopicPair> matched;  // greedy one-to-one, in match order
  std::size_t n_topics_a = 0;
  std::size_t n_topics_b = 0;
  std::size_t n_similar = 0;       // == matched.size()
  std::size_t n_passing_pairs = 0; // pairs passing the thresholds before one-to-one matching
  std::size_t n_texts = 0;
  std::size_t n_texts_similar = 0;
  std::size_t n_texts_clustered_both = 0;  // non-outlier in both models
  double pct_texts_similar = 0.0;              // over all comparison texts
  double pct_texts_similar_clustered = 0.0;    // over texts clustered in both models
  std::vector<int> unmatched_a;
  std::vector<int> unmatched_b;
};

namespace detail {

inline std::map<std::string, int> membership(const topics::TopicModel& m) {
  std::map<std::string, int> out;
  for (const auto& t : m.topics)
    for (const auto& id : t.member_ids) out.emplace(id, t.topic_id);
  return out;
}

}  // namespace detail

// Compares two models built over the same answer ids. `comparison_ids` are
// the texts whose clustering is compared (speech answers); ids that are
// outliers in either model count as not similar.
inline TopicMatchReport match_models(const topics::TopicModel& a, const topics::TopicModel& b,
                                     const std::vector<std::string>& comparison_ids, const CompareConfig& cfg = {}) {
  if (a.topics.empty() || b.topics.empty()) throw DataError("match_models: a model without topics");
  TopicMatchReport r;
  r.n_topics_a = a.topics.size();
  r.n_topics_b = b.topics.size();

  const std::size_t nb = b.topics.size();
  r.pairs.resize(a.topics.size() * nb);
  parallel_for(r.pairs.size(), cfg.threads, [&](std::size_t k) {
    const auto& ta = a.topics[k / nb];
    const auto& tb = b.topics[k % nb];
    SpearmanOptions opt = cfg.spearman;
    opt.seed = derive_seed(cfg.spearman.seed, "topic_compare:permutation:" + std::to_string(ta.topic_id) + ":" +
                                                  std::to_string(tb.topic_id));
    const auto s = spearman_top100(ta.top_terms(opt.max_words), tb.top_terms(opt.max_words), opt);
    r.pairs[k] = {ta.topic_id, tb.topic_id, s.rho, s.p, s.n_union,
                  classify_pair(s.rho, s.p, cfg.rho_threshold, cfg.p_threshold)};
  });

  std::vector<const TopicPair*> passing;
  for (const auto& p : r.pairs)
    if (p.similar) passing.push_back(&p);
  r.n_passing_pairs = passing.size();
  std::stable_sort(passing.begin(), passing.end(), [](const TopicPair* x, const TopicPair* y) {
    if (x->rho != y->rho) return x->rho > y->rho;
    return x->topic_a != y->topic_a ? x->topic_a < y->topic_a : x->topic_b < y->topic_b;
  });
  std::set<int> used_a, used_b;
  for (const auto* p : passing) {
    if (used_a.contains(p->topic_a) || used_b.contains(p->topic_b)) continue;
    used_a.insert(p->topic_a);
    used_b.insert(p->topic_b);
    r.matched.push_back(*p);
  }
  r.n_similar = r.matched.size();
  for (const auto& t : a.topics)
    if (!used_a.contains(t.topic_id)) r.unmatched_a.push_back(t.topic_id);
  for (const auto& t : b.topics)
    if (!used_b.contains(t.topic_id)) r.unmatched_b.push_back(t.topic_id);

  std::set<std::pair<int, int>> matched_set;
  for (const auto& p : r.matched) matched_set.emplace(p.topic_a, p.topic_b);
  const auto ma = detail::membership(a), mb = detail::membership(b);
  r.n_texts = comparison_ids.size();
  for (const auto& id : comparison_ids) {
    auto ia = ma.find(id), ib = mb.find(id);
    if (ia == ma.end() || ib == mb.end()) continue;
    ++r.n_texts_clustered_both;
    if (matched_set.contains({ia->second, ib->second})) ++r.n_texts_similar;
  }
  auto pct = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
  };
  r.pct_texts_similar = pct(r.n_texts_similar, r.n_texts);
  r.pct_texts_similar_clustered = pct(r.n_texts_similar, r.n_texts_clustered_both);
  return r;
}

}  // namespace openresp::topic_compare
