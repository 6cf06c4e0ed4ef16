#pragma once

#include <map>
#include <string>
#include <vector>

#include "openresp/agreement/ratings.hpp"
#include "openresp/error.hpp"

namespace openresp::agreement {

struct NeutralSplit {
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
};

// Drops every item that at least one of the given raters labelled neutral.
inline NeutralSplit neutral_filter(const std::vector<const ItemLabels*>& raters,
                                   const std::vector<std::string>& items, const Label& neutral = "neutral") {
  NeutralSplit out;
  for (const auto& item : items) {
    bool any_neutral = false;
    for (const auto* r : raters) {
      auto it = r->find(item);
      if (it == r->end()) throw DataError("missing rating for item '" + item + "'");
      any_neutral = any_neutral || it->second == neutral;
    }
    (any_neutral ? out.dropped : out.kept).push_back(item);
  }
  return out;
}

enum class NeutralityRule {
  majority,  // answer is neutral when more than half of the raters chose neutral
  any,       // answer is neutral when any rater chose neutral
};

struct QuestionNeutrality {
  std::string question_id;
  std::size_t n_answers = 0;
  std::size_t n_neutral = 0;
  double neutral_pct = 0.0;
  bool excluded = false;
};

// Per-answer label vectors (one entry per rater), grouped by question.
using GroupedRatings = std::map<std::string, std::vector<std::vector<Label>>>;

// A question is excluded when its neutral share strictly exceeds threshold_pct.
inline std::vector<QuestionNeutrality> question_neutral_exclusion(const GroupedRatings& grouped,
                                                                  double threshold_pct = 50.0,
                                                                  NeutralityRule rule = NeutralityRule::majority,
                                                                  const Label& neutral = "neutral") {
  std::vector<QuestionNeutrality> out;
  for (const auto& [q, answers] : grouped) {
    QuestionNeutrality s;
    s.question_id = q;
    s.n_answers = answers.size();
    for (const auto& labels : answers) {
      std::size_t k = 0;
      for (const auto& l : labels) k += l == neutral;
      const bool is_neutral = rule == NeutralityRule::any ? k > 0 : 2 * k > labels.size();
      s.n_neutral += is_neutral;
    }
    s.neutral_pct = s.n_answers == 0 ? 0.0
                                     : 100.0 * static_cast<double>(s.n_neutral) / static_cast<double>(s.n_answers);
    s.excluded = s.neutral_pct > threshold_pct;
    out.push_back(s);
  }
  return out;
}

inline std::vector<std::string> excluded_questions(const std::vector<QuestionNeutrality>& stats) {
  std::vector<std::string> out;
  for (const auto& s : stats)
    if (s.excluded) out.push_back(s.question_id);
  return out;
}

}  // namespace openresp::agreement
