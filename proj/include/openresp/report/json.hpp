#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "openresp/agreement/evaluation.hpp"
#include "openresp/asr_eval/deletions.hpp"
#include "openresp/asr_eval/wer.hpp"
#include "openresp/corpus/stats.hpp"
#include "openresp/report/tables.hpp"
#include "openresp/topic_compare/match.hpp"

namespace openresp::report {

using nlohmann::ordered_json;

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline ordered_json to_json(const corpus::ModalityStats& s) {
  return ordered_json{{"responses", s.response_count},
                      {"median_words", opt(s.median_words)},
                      {"mean_words", opt(s.mean_words)},
                      {"max_words", s.max_words},
                      {"total_words", s.total_words},
                      {"median_content_words", opt(s.median_content_words)},
                      {"mean_content_words", opt(s.mean_content_words)},
                      {"total_content_words", s.total_content_words},
                      {"pct_content_words", opt(s.pct_content_words)}};
}

inline ordered_json to_json(const corpus::CorpusStats& s) {
  return ordered_json{{"speech", to_json(s.speech)}, {"keyboard", to_json(s.keyboard)}};
}

inline ordered_json to_json(const asr_eval::EditCounts& c) {
  return ordered_json{{"substitutions", c.substitutions}, {"deletions", c.deletions}, {"insertions", c.insertions},
                      {"correct", c.correct},             {"n_ref", c.n_ref}};
}

inline ordered_json to_json(const asr_eval::WerReport& r, bool per_utterance = true) {
  ordered_json j{{"wer", r.wer},
                 {"sub_rate", r.sub_rate},
                 {"del_rate", r.del_rate},
                 {"ins_rate", r.ins_rate},
                 {"totals", to_json(r.totals)}};
  if (per_utterance) {
    ordered_json u = ordered_json::array();
    for (const auto& x : r.per_utterance)
      u.push_back(ordered_json{{"id", x.response_id}, {"counts", to_json(x.alignment.counts)}});
    j["per_utterance"] = u;
  }
  return j;
}

inline ordered_json to_json(const asr_eval::DeletionAnalysis& d) {
  ordered_json top = ordered_json::array();
  for (std::size_t i = 0; i < d.top_deletions.size() && i < d.top_k; ++i) {
    const auto& r = d.top_deletions[i];
    top.push_back(ordered_json{{"word", r.token},
                               {"count", r.count},
                               {"cumulative_pct", r.cumulative_pct},
                               {"monosyllabic", r.monosyllabic}});
  }
  return ordered_json{{"top_k", d.top_k},
                      {"total_deletions", d.total_deletions},
                      {"total_substitutions", d.total_substitutions},
                      {"top_k_share_pct", d.top_k_share_pct},
                      {"monosyllabic_top_k_share_pct", d.monosyllabic_top_k_share},
                      {"deleted_oov_pct", d.deleted_oov_pct},
                      {"substituted_ref_oov_pct", d.substituted_ref_oov_pct},
                      {"oov_share_of_all_deletions_pct", d.oov_share_of_all_deletions},
                      {"oov_share_of_all_substitutions_pct", d.oov_share_of_all_substitutions},
                      {"top_deletions", top}};
}

inline ordered_json to_json(const agreement::SentimentEvaluation& ev) {
  ordered_json q = ordered_json::array();
  for (const auto& s : ev.questions)
    q.push_back(ordered_json{{"question", s.question_id},
                             {"answers", s.n_answers},
                             {"neutral", s.n_neutral},
                             {"neutral_pct", s.neutral_pct},
                             {"excluded", s.excluded}});
  ordered_json prf = ordered_json::object();
  for (const auto& l : ev.scored_labels) {
    if (!ev.prf.contains(l)) continue;
    const auto& p = ev.prf.at(l);
    prf[l] = ordered_json{{"precision", opt(p.precision)}, {"recall", opt(p.recall)}, {"f1", opt(p.f1)},
                          {"tp", p.tp},                    {"fp", p.fp},            {"fn", p.fn}};
  }
  ordered_json conf = ordered_json::object();
  for (const auto& [g, row] : ev.confusion) {
    ordered_json r = ordered_json::object();
    for (const auto& [p, c] : row) r[p] = c;
    conf[g] = r;
  }
  return ordered_json{{"human_raters", ev.human_raters},
                      {"questions", q},
                      {"excluded_questions", ev.excluded_questions},
                      {"items_rated", ev.n_items_total},
                      {"items_after_question_exclusion", ev.n_items_after_questions},
                      {"items_non_neutral", ev.neutral.kept.size()},
                      {"kappa_humans", ev.kappa_humans},
                      {"perfect_agreement_humans", ev.perfect_humans},
                      {"kappa_all_raters", opt(ev.kappa_all)},
                      {"perfect_agreement_all_raters", opt(ev.perfect_all)},
                      {"gold_ties", ev.gold.ties},
                      {"prf", prf},
                      {"confusion_gold_by_predicted", conf}};
}

inline ordered_json to_json(const topic_compare::TopicMatchReport& r) {
  auto pair_json = [](const topic_compare::TopicPair& p) {
    return ordered_json{{"topic_a", p.topic_a}, {"topic_b", p.topic_b}, {"rho", p.rho},
                        {"p", opt(p.p)},        {"n_words", p.n_union}, {"similar", p.similar}};
  };
  ordered_json pairs = ordered_json::array(), matched = ordered_json::array();
  for (const auto& p : r.pairs) pairs.push_back(pair_json(p));
  for (const auto& p : r.matched) matched.push_back(pair_json(p));
  return ordered_json{{"n_topics_a", r.n_topics_a},
                      {"n_topics_b", r.n_topics_b},
                      {"n_similar", r.n_similar},
                      {"n_passing_pairs", r.n_passing_pairs},
                      {"n_texts", r.n_texts},
                      {"n_texts_similar", r.n_texts_similar},
                      {"n_texts_clustered_both", r.n_texts_clustered_both},
                      {"pct_texts_similar", r.pct_texts_similar},
                      {"pct_texts_similar_clustered", r.pct_texts_similar_clustered},
                      {"matched", matched},
                      {"unmatched_a", r.unmatched_a},
                      {"unmatched_b", r.unmatched_b},
                      {"pairs", pairs}};
}

inline ordered_json to_json(const std::vector<CompareRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j{{"answer_set", r.answer_set}};
    j.update(to_json(r.report));
    out.push_back(j);
  }
  return out;
}

}  // namespace openresp::report
