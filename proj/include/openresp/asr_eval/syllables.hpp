#pragma once

#include <string>
#include <string_view>

namespace openresp::asr_eval {

// Dutch syllable estimate: maximal runs of {a,e,i,o,u,y} after collapsing
// the digraph "ij" into one nucleus; at least 1. Non-ASCII bytes (accented
// vowels included) are treated as non-vowels.
inline int syllable_count(std::string_view token) {
  std::string t;
  t.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] == 'i' && i + 1 < token.size() && token[i + 1] == 'j') {
      t.push_back('#');
      ++i;
    } else {
      t.push_back(token[i]);
    }
  }
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y' || c == '#';
  };
  int runs = 0;
  bool in_run = false;
  for (char c : t) {
    const bool v = vowel(c);
    if (v && !in_run) ++runs;
    in_run = v;
  }
  return runs == 0 ? 1 : runs;
}

}  // namespace openresp::asr_eval
