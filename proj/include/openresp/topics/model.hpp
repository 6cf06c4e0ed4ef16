#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openresp/error.hpp"

namespace openresp::topics {

enum class TfidfVariant {
  class_based,  // (f_tc / W_c) * ln(1 + m / f_t)
  classic,      // (f_tc / W_c) * ln(N_clusters / df_t)
};

inline std::string_view to_string(TfidfVariant v) noexcept {
  return v == TfidfVariant::class_based ? "class_based" : "classic";
}

inline TfidfVariant parse_tfidf_variant(std::string_view s) {
  if (s == "class_based") return TfidfVariant::class_based;
  if (s == "classic") return TfidfVariant::classic;
  throw ConfigError("unknown tfidf variant '" + std::string(s) + "'");
}

struct TermScore {
  std::string term;
  double score = 0.0;

  friend bool operator==(const TermScore&, const TermScore&) = default;
};

struct Topic {
  int topic_id = 0;
  std::vector<TermScore> terms;  // descending score, ties lexicographic
  std::vector<std::string> member_ids;

  std::vector<std::string> top_terms(std::size_t k) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < terms.size() && i < k; ++i) out.push_back(terms[i].term);
    return out;
  }
};

struct TopicModel {
  std::vector<Topic> topics;
  std::size_t min_cluster_size = 0;
  std::optional<double> coherence_umass;
  std::size_t m_total_answers = 0;  // includes outliers
  std::vector<std::string> outlier_ids;
  TfidfVariant variant = TfidfVariant::class_based;

  const Topic* find(int topic_id) const noexcept {
    for (const auto& t : topics)
      if (t.topic_id == topic_id) return &t;
    return nullptr;
  }
};

// First min(k, |vocabulary|) terms of every topic, in score order.
inline std::vector<std::vector<std::string>> top_words(const TopicModel& model, std::size_t k) {
  if (k == 0) throw ConfigError("top_words needs k >= 1");
  std::vector<std::vector<std::string>> out;
  out.reserve(model.topics.size());
  for (const auto& t : model.topics) out.push_back(t.top_terms(k));
  return out;
}

}  // namespace openresp::topics
