#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "openresp/corpus/tokenize.hpp"
#include "openresp/error.hpp"
#include "openresp/io.hpp"

namespace openresp::corpus {

// A full-sequence token pattern; "(tok)" marks an optional token.
class NonResponsePattern {
 public:
  struct Item {
    std::string token;
    bool optional = false;
  };

  static NonResponsePattern parse(std::string_view text) {
    NonResponsePattern p;
    p.source_ = std::string(text);
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto sp = text.find(' ', pos);
      if (sp == std::string_view::npos) sp = text.size();
      std::string_view tok = text.substr(pos, sp - pos);
      pos = sp + 1;
      if (tok.empty()) continue;
      Item item;
      if (tok.front() == '(' || tok.back() == ')') {
        if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
          throw ConfigError("malformed non-response pattern '" + p.source_ + "'");
        tok = tok.substr(1, tok.size() - 2);
        item.optional = true;
      }
      if (tok.find_first_of("()") != std::string_view::npos)
        throw ConfigError("malformed non-response pattern '" + p.source_ + "'");
      item.token = std::string(tok);
      p.items_.push_back(std::move(item));
    }
    if (p.items_.empty()) throw ConfigError("empty non-response pattern");
    return p;
  }

  bool matches(const std::vector<std::string>& tokens) const { return match_from(tokens, 0, 0); }

  const std::string& source() const noexcept { return source_; }

 private:
  bool match_from(const std::vector<std::string>& tokens, std::size_t ti, std::size_t pi) const {
    if (pi == items_.size()) return ti == tokens.size();
    const Item& it = items_[pi];
    if (ti < tokens.size() && tokens[ti] == it.token && match_from(tokens, ti + 1, pi + 1)) return true;
    return it.optional && match_from(tokens, ti, pi + 1);
  }

  std::string source_;
  std::vector<Item> items_;
};

inline std::vector<NonResponsePattern> parse_blocklist(std::string_view text) {
  std::vector<NonResponsePattern> out;
  for (const auto& line : parse_word_lines(text)) out.push_back(NonResponsePattern::parse(line));
  return out;
}

inline std::vector<NonResponsePattern> load_blocklist(const std::filesystem::path& path) {
  return parse_blocklist(read_file(path));
}

inline std::vector<NonResponsePattern> default_blocklist() { return parse_blocklist("ik weet (het) niet\n"); }

inline bool is_nonresponse(const TokenizedAnswer& a, const std::vector<NonResponsePattern>& blocklist) {
  for (const auto& p : blocklist)
    if (p.matches(a.tokens)) return true;
  return false;
}

// Drops answers whose whole token sequence matches a pattern; order preserved.
inline std::vector<TokenizedAnswer> filter_nonresponses(std::vector<TokenizedAnswer> answers,
                                                        const std::vector<NonResponsePattern>& blocklist) {
  std::erase_if(answers, [&](const TokenizedAnswer& a) { return is_nonresponse(a, blocklist); });
  return answers;
}

}  // namespace openresp::corpus
