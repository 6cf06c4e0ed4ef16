#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "openresp/corpus/tokenize.hpp"
#include "openresp/error.hpp"
#include "openresp/topics/model.hpp"

namespace openresp::topics {

// Cluster-as-document TF-IDF. labels[i] is the cluster of answers[i] (-1 for
// outliers, which feed no cluster document but still count in m).
inline TopicModel cluster_tfidf(const std::vector<corpus::TokenizedAnswer>& answers, const std::vector<int>& labels,
                                TfidfVariant variant = TfidfVariant::class_based) {
  if (answers.size() != labels.size()) throw DataError("cluster_tfidf: answers and labels differ in length");
  int n_clusters = 0;
  for (int l : labels) n_clusters = std::max(n_clusters, l + 1);
  if (n_clusters == 0) throw ComputationError("cluster_tfidf: no non-outlier cluster");

  TopicModel model;
  model.variant = variant;
  model.m_total_answers = answers.size();
  model.topics.resize(static_cast<std::size_t>(n_clusters));
  std::vector<std::map<std::string, std::size_t>> tf(static_cast<std::size_t>(n_clusters));
  std::vector<std::size_t> length(static_cast<std::size_t>(n_clusters), 0);
  std::map<std::string, std::size_t> total, df;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (labels[i] < 0) {
      model.outlier_ids.push_back(answers[i].response_id);
      continue;
    }
    const auto c = static_cast<std::size_t>(labels[i]);
    model.topics[c].member_ids.push_back(answers[i].response_id);
    for (const auto& tok : answers[i].tokens) {
      ++tf[c][tok];
      ++total[tok];
    }
    length[c] += answers[i].tokens.size();
  }
  for (const auto& doc : tf)
    for (const auto& [t, _] : doc) ++df[t];

  const double m = static_cast<double>(answers.size());
  for (std::size_t c = 0; c < tf.size(); ++c) {
    Topic& topic = model.topics[c];
    topic.topic_id = static_cast<int>(c);
    if (length[c] == 0) throw ComputationError("cluster " + std::to_string(c) + " has an empty document");
    const double w = static_cast<double>(length[c]);
    for (const auto& [term, f] : tf[c]) {
      const double tf_norm = static_cast<double>(f) / w;
      const double idf = variant == TfidfVariant::class_based
                             ? std::log(1.0 + m / static_cast<double>(total[term]))
                             : std::log(static_cast<double>(n_clusters) / static_cast<double>(df[term]));
      topic.terms.push_back({term, tf_norm * idf});
    }
    std::stable_sort(topic.terms.begin(), topic.terms.end(),
                     [](const TermScore& a, const TermScore& b) { return a.score > b.score; });
  }
  return model;
}

}  // namespace openresp::topics
