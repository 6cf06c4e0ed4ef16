#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "openresp/corpus/tokenize.hpp"
#include "openresp/error.hpp"
#include "openresp/topics/model.hpp"

namespace openresp::topics {

// Document-frequency index over a reference corpus (one answer = one doc).
class DocumentIndex {
 public:
  explicit DocumentIndex(const std::vector<corpus::TokenizedAnswer>& docs) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (const auto& tok : docs[d].tokens) {
        auto& v = postings_[tok];
        if (v.empty() || v.back() != d) v.push_back(d);
      }
    }
  }

  std::size_t df(const std::string& w) const {
    auto it = postings_.find(w);
    return it == postings_.end() ? 0 : it->second.size();
  }

  std::size_t co_df(const std::string& a, const std::string& b) const {
    auto ia = postings_.find(a), ib = postings_.find(b);
    if (ia == postings_.end() || ib == postings_.end()) return 0;
    const auto &x = ia->second, &y = ib->second;
    std::size_t i = 0, j = 0, k = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] < y[j]) {
        ++i;
      } else if (y[j] < x[i]) {
        ++j;
      } else {
        ++k, ++i, ++j;
      }
    }
    return k;
  }

 private:
  std::map<std::string, std::vector<std::size_t>, std::less<>> postings_;
};

struct CoherenceResult {
  std::optional<double> score;                     // mean over scored topics
  std::vector<std::optional<double>> topic_scores; // per topic, in model order
  std::size_t skipped_pairs = 0;                   // pairs with D(w_j) = 0
  std::vector<int> skipped_topics;                 // topics without any scoreable pair
};

// u_mass: for ordered top words w_1..w_N of a topic,
//   sum over i >= 2, j < i of ln((D(w_i, w_j) + 1) / D(w_j));
// topic score = mean over scored pairs, model score = mean over topics.
inline CoherenceResult umass_coherence(const TopicModel& model, const DocumentIndex& index, std::size_t top_n = 20) {
  if (model.topics.empty()) throw ComputationError("u_mass coherence: model has no topics");
  CoherenceResult r;
  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& topic : model.topics) {
    const auto words = topic.top_terms(top_n);
    double topic_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < words.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const std::size_t dj = index.df(words[j]);
        if (dj == 0) {
          ++r.skipped_pairs;
          continue;
        }
        topic_sum += std::log((static_cast<double>(index.co_df(words[i], words[j])) + 1.0) / static_cast<double>(dj));
        ++pairs;
      }
    }
    if (pairs == 0) {
      r.topic_scores.emplace_back(std::nullopt);
      r.skipped_topics.push_back(topic.topic_id);
      continue;
    }
    const double ts = topic_sum / static_cast<double>(pairs);
    r.topic_scores.emplace_back(ts);
    sum += ts;
    ++scored;
  }
  if (scored == 0) throw ComputationError("u_mass coherence: every topic has fewer than two scoreable words");
  r.score = sum / static_cast<double>(scored);
  return r;
}

inline CoherenceResult umass_coherence(const TopicModel& model, const std::vector<corpus::TokenizedAnswer>& answers,
                                       std::size_t top_n = 20) {
  return umass_coherence(model, DocumentIndex(answers), top_n);
}

}  // namespace openresp::topics
