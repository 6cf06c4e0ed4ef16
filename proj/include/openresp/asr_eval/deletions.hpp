#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "openresp/asr_eval/syllables.hpp"
#include "openresp/asr_eval/wer.hpp"

namespace openresp::asr_eval {

struct RankedDeletion {
  std::string token;
  std::size_t count = 0;
  double cumulative_pct = 0.0;
  bool monosyllabic = false;
};

struct DeletionAnalysis {
  std::size_t top_k = 25;
  std::vector<RankedDeletion> top_deletions;  // every deleted type, ranked
  std::size_t total_deletions = 0;
  std::size_t total_substitutions = 0;
  double top_k_share_pct = 0.0;               // share of deletion instances covered by the top k
  double monosyllabic_top_k_share = 0.0;      // % of the top-k types that are monosyllabic
  // Reference words that occur nowhere in the hypothesis text of the corpus.
  double deleted_oov_pct = 0.0;               // over distinct deleted types
  double substituted_ref_oov_pct = 0.0;       // over distinct substituted reference types
  double oov_share_of_all_deletions = 0.0;    // over deletion instances
  double oov_share_of_all_substitutions = 0.0;// over substitution instances
};

namespace detail {

inline double pct(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

inline DeletionAnalysis deletion_analysis(const WerReport& report, std::size_t top_k = 25) {
  DeletionAnalysis out;
  out.top_k = top_k;
  std::map<std::string, std::size_t> deleted, substituted;
  std::set<std::string> hyp_vocab;
  for (const auto& u : report.per_utterance) {
    for (const auto& op : u.alignment.ops) {
      if (op.hyp) hyp_vocab.insert(*op.hyp);
      if (op.kind == EditKind::del) ++deleted[*op.ref];
      if (op.kind == EditKind::substitute) ++substituted[*op.ref];
    }
  }

  for (const auto& [tok, c] : deleted) {
    out.top_deletions.push_back({tok, c, 0.0, syllable_count(tok) == 1});
    out.total_deletions += c;
  }
  // std::map iteration is lexicographic, so stable_sort keeps that as tie-break.
  std::stable_sort(out.top_deletions.begin(), out.top_deletions.end(),
                   [](const RankedDeletion& a, const RankedDeletion& b) { return a.count > b.count; });
  std::size_t running = 0;
  for (auto& d : out.top_deletions) {
    running += d.count;
    d.cumulative_pct = detail::pct(running, out.total_deletions);
  }
  const std::size_t k = std::min(top_k, out.top_deletions.size());
  if (k > 0) {
    out.top_k_share_pct = out.top_deletions[k - 1].cumulative_pct;
    std::size_t mono = 0;
    for (std::size_t i = 0; i < k; ++i) mono += out.top_deletions[i].monosyllabic;
    out.monosyllabic_top_k_share = detail::pct(mono, k);
  }

  auto oov = [&](const std::map<std::string, std::size_t>& m, std::size_t& total, double& type_pct,
                 double& inst_pct) {
    std::size_t types = 0, inst = 0;
    total = 0;
    for (const auto& [tok, c] : m) {
      total += c;
      if (!hyp_vocab.contains(tok)) {
        ++types;
        inst += c;
      }
    }
    type_pct = detail::pct(types, m.size());
    inst_pct = detail::pct(inst, total);
  };
  std::size_t del_total = 0;
  oov(deleted, del_total, out.deleted_oov_pct, out.oov_share_of_all_deletions);
  oov(substituted, out.total_substitutions, out.substituted_ref_oov_pct, out.oov_share_of_all_substitutions);
  return out;
}

}  // namespace openresp::asr_eval
