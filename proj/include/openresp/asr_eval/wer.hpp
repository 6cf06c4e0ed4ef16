#pragma once

#include <string>
#include <vector>

#include "openresp/asr_eval/align.hpp"
#include "openresp/error.hpp"
#include "openresp/parallel.hpp"

namespace openresp::asr_eval {

struct Utterance {
  std::string response_id;
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
};

struct UtteranceResult {
  std::string response_id;
  AlignmentResult alignment;
};

// Rates are percentages of the pooled reference length.
struct WerReport {
  double wer = 0.0;
  double sub_rate = 0.0;
  double del_rate = 0.0;
  double ins_rate = 0.0;
  EditCounts totals;
  std::vector<UtteranceResult> per_utterance;
};

// Pooled WER = 100 (S + D + I) / N_ref over all utterances. An empty
// reference still contributes its insertions.
inline WerReport wer(const std::vector<Utterance>& utterances, unsigned threads = 1) {
  WerReport r;
  r.per_utterance.resize(utterances.size());
  parallel_for(utterances.size(), threads, [&](std::size_t i) {
    r.per_utterance[i] = {utterances[i].response_id, align(utterances[i].ref, utterances[i].hyp)};
  });
  for (const auto& u : r.per_utterance) r.totals += u.alignment.counts;
  if (r.totals.n_ref == 0) throw ComputationError("pooled WER undefined: every reference is empty");
  const double n = static_cast<double>(r.totals.n_ref);
  r.sub_rate = 100.0 * static_cast<double>(r.totals.substitutions) / n;
  r.del_rate = 100.0 * static_cast<double>(r.totals.deletions) / n;
  r.ins_rate = 100.0 * static_cast<double>(r.totals.insertions) / n;
  r.wer = 100.0 * static_cast<double>(r.totals.errors()) / n;
  return r;
}

}  // namespace openresp::asr_eval
