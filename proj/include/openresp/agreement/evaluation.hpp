#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openresp/agreement/filters.hpp"
#include "openresp/agreement/fleiss.hpp"
#include "openresp/agreement/gold.hpp"
#include "openresp/agreement/ratings.hpp"
#include "openresp/error.hpp"

namespace openresp::agreement {

struct SentimentConfig {
  std::vector<Label> labels{"negative", "positive", "neutral"};
  Label neutral = "neutral";
  std::optional<std::string> machine_rater;
  double neutral_pct = 50.0;
  NeutralityRule rule = NeutralityRule::majority;
  // Questions asked in both modalities are judged together: id -> partner id.
  std::map<std::string, std::string> question_pairs;
};

struct SentimentEvaluation {
  std::vector<std::string> human_raters;
  std::vector<QuestionNeutrality> questions;  // one row per pooled question group
  std::vector<std::string> excluded_questions;
  std::size_t n_items_total = 0;
  std::size_t n_items_after_questions = 0;
  NeutralSplit neutral;  // over items that survived question exclusion
  double kappa_humans = 0.0;
  std::size_t perfect_humans = 0;
  std::optional<double> kappa_all;
  std::optional<std::size_t> perfect_all;
  MajorityGold gold;
  std::vector<Label> scored_labels;  // non-neutral labels, config order
  std::map<Label, Prf> prf;          // machine vs majority gold
  Confusion confusion;
};

// Question exclusion -> neutral filter -> kappa (humans, humans + machine) ->
// majority gold -> per-label precision/recall/F1 of the machine rater.
inline SentimentEvaluation evaluate_sentiment(const RatingTable& table, const SentimentConfig& cfg) {
  SentimentEvaluation ev;
  if (std::find(cfg.labels.begin(), cfg.labels.end(), cfg.neutral) == cfg.labels.end())
    throw ConfigError("neutral label '" + cfg.neutral + "' is not in the label set");
  for (const auto& r : table.raters)
    if (!cfg.machine_rater || r != *cfg.machine_rater) ev.human_raters.push_back(r);
  if (cfg.machine_rater && !table.by_rater.contains(*cfg.machine_rater))
    throw DataError("machine rater '" + *cfg.machine_rater + "' has no ratings");
  if (ev.human_raters.size() < 2) throw DataError("need at least two human raters");
  ev.n_items_total = table.items.size();

  auto group_of = [&](const std::string& q) {
    auto it = cfg.question_pairs.find(q);
    if (it == cfg.question_pairs.end()) return q;
    return std::min(q, it->second) + "/" + std::max(q, it->second);
  };
  GroupedRatings grouped;
  std::map<std::string, std::string> item_group;
  for (const auto& item : table.items) {
    auto q = table.question_of.find(item);
    if (q == table.question_of.end()) throw DataError("no question id for item '" + item + "'");
    std::vector<Label> labels;
    for (const auto& r : ev.human_raters) {
      const auto& lab = table.of(r);
      auto it = lab.find(item);
      if (it == lab.end()) throw DataError("rater '" + r + "' has no rating for item '" + item + "'");
      labels.push_back(it->second);
    }
    const auto g = group_of(q->second);
    item_group[item] = g;
    grouped[g].push_back(std::move(labels));
  }
  ev.questions = question_neutral_exclusion(grouped, cfg.neutral_pct, cfg.rule, cfg.neutral);
  std::set<std::string> excluded_groups;
  for (const auto& s : ev.questions)
    if (s.excluded) excluded_groups.insert(s.question_id);
  std::set<std::string> excluded_ids;
  for (const auto& [item, g] : item_group)
    if (excluded_groups.contains(g)) excluded_ids.insert(table.question_of.find(item)->second);
  ev.excluded_questions.assign(excluded_ids.begin(), excluded_ids.end());

  std::vector<std::string> items;
  for (const auto& item : table.items)
    if (!excluded_groups.contains(item_group[item])) items.push_back(item);
  ev.n_items_after_questions = items.size();

  std::vector<const ItemLabels*> humans;
  for (const auto& r : ev.human_raters) humans.push_back(&table.of(r));
  ev.neutral = neutral_filter(humans, items, cfg.neutral);
  if (ev.neutral.kept.empty()) throw ComputationError("no non-neutral items left after filtering");

  const auto hm = build_matrix(table, ev.human_raters, ev.neutral.kept, cfg.labels);
  ev.kappa_humans = fleiss_kappa(hm);
  ev.perfect_humans = perfect_agreement_count(hm);
  ev.gold = majority_gold(hm);
  for (const auto& l : cfg.labels)
    if (l != cfg.neutral) ev.scored_labels.push_back(l);

  if (cfg.machine_rater) {
    auto all = ev.human_raters;
    all.push_back(*cfg.machine_rater);
    const auto am = build_matrix(table, all, ev.neutral.kept, cfg.labels);
    ev.kappa_all = fleiss_kappa(am);
    ev.perfect_all = perfect_agreement_count(am);
    const auto predicted = restrict_to(table.of(*cfg.machine_rater), ev.gold.gold);
    for (const auto& l : ev.scored_labels) ev.prf[l] = prf(ev.gold.gold, predicted, l);
    ev.confusion = confusion(ev.gold.gold, predicted);
  }
  return ev;
}

}  // namespace openresp::agreement
