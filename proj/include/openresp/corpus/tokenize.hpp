#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "openresp/io.hpp"

namespace openresp::corpus {

using Stopwords = std::set<std::string, std::less<>>;

struct TokenizedAnswer {
  std::string response_id;
  std::vector<std::string> tokens;
  std::vector<bool> content_flags;  // same length as tokens

  std::size_t content_count() const noexcept {
    std::size_t n = 0;
    for (bool f : content_flags) n += f;
    return n;
  }

  friend bool operator==(const TokenizedAnswer&, const TokenizedAnswer&) = default;
};

inline bool has_letter(std::string_view token) noexcept {
  const auto* s = reinterpret_cast<const uint8_t*>(token.data());
  const auto len = static_cast<int32_t>(token.size());
  for (int32_t i = 0; i < len;) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c >= 0 && u_isalpha(c)) return true;
  }
  return false;
}

inline bool is_content_word(std::string_view token, const Stopwords& stopwords) {
  return !stopwords.contains(token) && has_letter(token);
}

// Input must already be normalized; splits on single spaces.
inline TokenizedAnswer tokenize(std::string_view normalized, const Stopwords& stopwords,
                                std::string response_id = {}) {
  TokenizedAnswer out;
  out.response_id = std::move(response_id);
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    auto sp = normalized.find(' ', pos);
    if (sp == std::string_view::npos) sp = normalized.size();
    if (sp > pos) {
      std::string tok(normalized.substr(pos, sp - pos));
      out.content_flags.push_back(is_content_word(tok, stopwords));
      out.tokens.push_back(std::move(tok));
    }
    pos = sp + 1;
  }
  return out;
}

// One entry per line; blank lines and lines starting with '#' are skipped.
inline std::vector<std::string> parse_word_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

inline Stopwords load_stopwords(const std::filesystem::path& path) {
  auto words = parse_word_lines(read_file(path));
  return Stopwords(words.begin(), words.end());
}

}  // namespace openresp::corpus
