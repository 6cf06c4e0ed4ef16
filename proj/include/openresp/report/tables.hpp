#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "openresp/agreement/evaluation.hpp"
#include "openresp/asr_eval/deletions.hpp"
#include "openresp/asr_eval/wer.hpp"
#include "openresp/corpus/stats.hpp"
#include "openresp/report/format.hpp"
#include "openresp/topic_compare/match.hpp"
#include "openresp/topics/model_io.hpp"

namespace openresp::report {

inline std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

// Speech vs keyboard corpus statistics.
inline std::string stats_markdown(const corpus::CorpusStats& s) {
  const auto& sp = s.speech;
  const auto& kb = s.keyboard;
  std::vector<std::vector<std::string>> rows{
      {"# responses", thousands(sp.response_count), thousands(kb.response_count)},
      {"median # words", median_cell(sp.median_words), median_cell(kb.median_words)},
      {"average # words", fixed(sp.mean_words), fixed(kb.mean_words)},
      {"max # words", thousands(sp.max_words), thousands(kb.max_words)},
      {"total # words", thousands(sp.total_words), thousands(kb.total_words)},
      {"median # content words", median_cell(sp.median_content_words), median_cell(kb.median_content_words)},
      {"average # content words", fixed(sp.mean_content_words), fixed(kb.mean_content_words)},
      {"total # content words", thousands(sp.total_content_words), thousands(kb.total_content_words)},
      {"percentage content words", percent(sp.pct_content_words), percent(kb.pct_content_words)},
  };
  return markdown_table({"", "Speech", "Keyboard"}, {Align::left, Align::right, Align::right}, rows);
}

// One row per recogniser: WER and its substitution/deletion/insertion parts.
inline std::string wer_markdown(const std::vector<std::pair<std::string, asr_eval::WerReport>>& systems) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [label, r] : systems)
    rows.push_back({label, fixed(r.wer), fixed(r.sub_rate), fixed(r.del_rate), fixed(r.ins_rate)});
  return markdown_table({"Label", "WER", "subs", "del", "ins"},
                        {Align::left, Align::right, Align::right, Align::right, Align::right}, rows);
}

inline std::string deletions_markdown(const asr_eval::DeletionAnalysis& d) {
  std::string out;
  const std::size_t k = std::min(d.top_k, d.top_deletions.size());
  out += "Deletions: " + thousands(d.total_deletions) + ", substitutions: " + thousands(d.total_substitutions) + "\n\n";
  out += "The " + std::to_string(k) + " most frequent deletions account for " + fixed(d.top_k_share_pct) +
         "% of deletions; " + fixed(d.monosyllabic_top_k_share) + "% of them are monosyllabic.\n\n";
  out += fixed(d.deleted_oov_pct) + "% of deleted words and " + fixed(d.substituted_ref_oov_pct) +
         "% of substituted reference words never occur in the recogniser output (" +
         fixed(d.oov_share_of_all_deletions) + "% of deletion and " + fixed(d.oov_share_of_all_substitutions) +
         "% of substitution instances).\n\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& r = d.top_deletions[i];
    rows.push_back({std::to_string(i + 1), r.token, thousands(r.count), fixed(r.cumulative_pct),
                    r.monosyllabic ? "yes" : "no"});
  }
  out += markdown_table({"Rank", "Word", "Count", "Cumulative %", "Monosyllabic"},
                        {Align::right, Align::left, Align::right, Align::right, Align::left}, rows);
  return out;
}

// Per-label precision/recall/F1 of the automatic rater against majority gold,
// preceded by the agreement summary and the question exclusion table.
inline std::string sentiment_markdown(const agreement::SentimentEvaluation& ev) {
  std::string out;
  const std::string n = thousands(ev.neutral.kept.size());
  out += "Fleiss' kappa, human raters: " + correlation(ev.kappa_humans) + " (perfect agreement on " +
         thousands(ev.perfect_humans) + " of " + n + " answers)\n\n";
  if (ev.kappa_all)
    out += "Fleiss' kappa, human raters and automatic rater: " + correlation(*ev.kappa_all) + " (perfect agreement on " +
           thousands(*ev.perfect_all) + " of " + n + " answers)\n\n";
  if (!ev.prf.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& l : ev.scored_labels) {
      const auto& p = ev.prf.at(l);
      rows.push_back({capitalized(l), fixed(p.precision), fixed(p.recall), fixed(p.f1)});
    }
    out += markdown_table({"Label", "Precision", "Recall", "F1"},
                          {Align::left, Align::right, Align::right, Align::right}, rows);
    out += "\n";
  }
  std::vector<std::vector<std::string>> q;
  for (const auto& s : ev.questions)
    q.push_back({s.question_id, thousands(s.n_answers), thousands(s.n_neutral), percent(s.neutral_pct),
                 s.excluded ? "yes" : "no"});
  out += markdown_table({"Question", "# answers", "# neutral", "% neutral", "Excluded"},
                        {Align::left, Align::right, Align::right, Align::right, Align::left}, q);
  out += "\nAnswers: " + thousands(ev.n_items_total) + " rated, " + thousands(ev.n_items_after_questions) +
         " after question exclusion, " + n + " after dropping answers any human rated neutral";
  if (!ev.gold.ties.empty()) out += ", " + thousands(ev.gold.ties.size()) + " without a majority label";
  out += "\n";
  return out;
}

inline std::string topics_markdown(const topics::TopicModelFile& f, std::size_t k = 5) {
  std::string out = "Answer set: " + f.question_set + " (" + f.dataset + ")\n\n";
  out += "Minimum cluster size: " + std::to_string(f.model.min_cluster_size) +
         ", u_mass: " + fixed(f.model.coherence_umass, 4) + ", outliers: " + thousands(f.model.outlier_ids.size()) +
         " of " + thousands(f.model.m_total_answers) + "\n\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : f.model.topics) {
    std::string words;
    for (const auto& w : t.top_terms(k)) words += (words.empty() ? "" : ", ") + w;
    rows.push_back({std::to_string(t.topic_id), thousands(t.member_ids.size()), words});
  }
  out += markdown_table({"Topic", "# answers", "top " + std::to_string(k) + " words"},
                        {Align::right, Align::right, Align::left}, rows);
  out += "\n";
  std::vector<std::vector<std::string>> sw;
  for (const auto& c : f.sweep.evaluated)
    sw.push_back({std::to_string(c.min_cluster_size), std::to_string(c.n_topics), thousands(c.n_outliers),
                  fixed(c.coherence, 4)});
  out += markdown_table({"Min cluster size", "# topics", "# outliers", "u_mass"},
                        {Align::right, Align::right, Align::right, Align::right}, sw);
  return out;
}

struct CompareRow {
  std::string answer_set;
  topic_compare::TopicMatchReport report;
};

// Topic counts per answer set and the share of speech texts that land in a
// matched pair of topics.
inline std::string compare_markdown(const std::vector<CompareRow>& rows, const std::string& name_a = "manual",
                                    const std::string& name_b = "automatic") {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({capitalized(r.answer_set), std::to_string(r.report.n_topics_a),
                     std::to_string(r.report.n_topics_b), std::to_string(r.report.n_similar),
                     fixed(r.report.pct_texts_similar, 0) + "%"});
  return markdown_table({"Answer set", "# topics " + name_a, "# topics " + name_b, "# topics similar",
                         "% texts in similar cluster"},
                        {Align::left, Align::right, Align::right, Align::right, Align::right}, cells);
}

// Top words of two topics side by side, captioned with their correlation.
inline std::string topic_pair_markdown(const topics::Topic& a, const topics::Topic& b, double rho,
                                       const std::string& name_a = "manual", const std::string& name_b = "automatic",
                                       std::size_t k = 5) {
  auto words = [&](const topics::Topic& t) {
    std::string s;
    for (const auto& w : t.top_terms(k)) s += (s.empty() ? "" : ", ") + w;
    return s;
  };
  return markdown_table({"Transcription", "top " + std::to_string(k) + " words (Spearman's R = " + correlation(rho) + ")"},
                        {Align::left, Align::left},
                        {{capitalized(name_a), words(a)}, {capitalized(name_b), words(b)}});
}

inline std::string pairs_markdown(const topic_compare::TopicMatchReport& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : r.pairs)
    rows.push_back({std::to_string(p.topic_a), std::to_string(p.topic_b), fixed(p.rho, 4),
                    p.p ? fixed(*p.p, 4) : std::string(undefined_cell), std::to_string(p.n_union),
                    p.similar ? "yes" : "no"});
  return markdown_table({"Topic A", "Topic B", "rho", "p", "# words", "Similar"},
                        {Align::right, Align::right, Align::right, Align::right, Align::right, Align::left}, rows);
}

}  // namespace openresp::report
