#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "openresp/corpus/response.hpp"
#include "openresp/corpus/tokenize.hpp"
#include "openresp/error.hpp"

namespace openresp::corpus {

// Median of a sample; even length -> mean of the two middle values.
inline std::optional<double> median(std::vector<std::size_t> xs) {
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return static_cast<double>(xs[n / 2]);
  return (static_cast<double>(xs[n / 2 - 1]) + static_cast<double>(xs[n / 2])) / 2.0;
}

struct ModalityStats {
  std::size_t response_count = 0;
  std::optional<double> median_words;
  std::optional<double> mean_words;
  std::size_t max_words = 0;
  std::size_t total_words = 0;
  std::optional<double> median_content_words;
  std::optional<double> mean_content_words;
  std::size_t total_content_words = 0;
  std::optional<double> pct_content_words;  // undefined when total_words == 0
};

struct CorpusStats {
  ModalityStats speech;
  ModalityStats keyboard;

  const ModalityStats& of(Modality m) const noexcept { return m == Modality::speech ? speech : keyboard; }
};

inline ModalityStats modality_stats(const std::vector<const TokenizedAnswer*>& answers) {
  ModalityStats s;
  s.response_count = answers.size();
  std::vector<std::size_t> words, content;
  words.reserve(answers.size());
  content.reserve(answers.size());
  for (const auto* a : answers) {
    words.push_back(a->tokens.size());
    content.push_back(a->content_count());
    s.total_words += a->tokens.size();
    s.total_content_words += content.back();
    s.max_words = std::max(s.max_words, a->tokens.size());
  }
  s.median_words = median(words);
  s.median_content_words = median(content);
  if (!answers.empty()) {
    const double n = static_cast<double>(answers.size());
    s.mean_words = static_cast<double>(s.total_words) / n;
    s.mean_content_words = static_cast<double>(s.total_content_words) / n;
  }
  if (s.total_words > 0)
    s.pct_content_words = 100.0 * static_cast<double>(s.total_content_words) / static_cast<double>(s.total_words);
  return s;
}

inline CorpusStats corpus_stats(const std::vector<TokenizedAnswer>& answers,
                                const std::map<std::string, Modality, std::less<>>& modality_of) {
  std::vector<const TokenizedAnswer*> speech, keyboard;
  for (const auto& a : answers) {
    auto it = modality_of.find(a.response_id);
    if (it == modality_of.end()) throw DataError("no modality known for response '" + a.response_id + "'");
    (it->second == Modality::speech ? speech : keyboard).push_back(&a);
  }
  return CorpusStats{modality_stats(speech), modality_stats(keyboard)};
}

}  // namespace openresp::corpus
