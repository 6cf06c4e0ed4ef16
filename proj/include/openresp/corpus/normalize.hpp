#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include "openresp/error.hpp"

namespace openresp::corpus {

namespace detail {

inline icu::UnicodeString nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = n->normalize(s, status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalization failed");
  return out;
}

enum class CharClass { letter, digit, apostrophe, hyphen, space, other };

inline CharClass classify(UChar32 c) noexcept {
  if (c == 0x27 || c == 0x2019) return CharClass::apostrophe;
  if (c == 0x2D || c == 0x2010) return CharClass::hyphen;
  if (u_isalpha(c)) return CharClass::letter;
  if (u_isdigit(c)) return CharClass::digit;
  if (u_isUWhiteSpace(c)) return CharClass::space;
  return CharClass::other;
}

}  // namespace detail

// Text normalization applied before tokenization and WER scoring:
//  - Unicode NFC, then lowercase (root locale), then NFC again;
//  - anything but letters, digits, apostrophes, hyphens and whitespace -> space;
//  - a hyphen survives only between two letters;
//  - an apostrophe survives between two letters, or at the start of a word
//    when a letter follows (Dutch clitics: 's, 't, 'n);
//  - surviving U+2019 / U+2010 are written as ASCII ' and -;
//  - whitespace runs collapse to one space, ends trimmed.
// normalize(normalize(x)) == normalize(x).
inline std::string normalize(std::string_view raw_text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw_text.data(), static_cast<int32_t>(raw_text.size())));
  u = detail::nfc(u);
  u.toLower(icu::Locale::getRoot());
  u = detail::nfc(u);

  std::vector<UChar32> cps;
  std::vector<detail::CharClass> cls;
  cps.reserve(static_cast<std::size_t>(u.length()));
  for (int32_t i = 0; i < u.length();) {
    UChar32 c = u.char32At(i);
    i += U16_LENGTH(c);
    auto k = detail::classify(c);
    if (k == detail::CharClass::other) {
      c = 0x20;
      k = detail::CharClass::space;
    }
    cps.push_back(c);
    cls.push_back(k);
  }

  icu::UnicodeString out;
  bool pending_space = false;
  const std::size_t n = cps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = cls[i];
    const bool prev_letter = i > 0 && cls[i - 1] == detail::CharClass::letter;
    const bool next_letter = i + 1 < n && cls[i + 1] == detail::CharClass::letter;
    const bool word_start = i == 0 || cls[i - 1] == detail::CharClass::space;
    UChar32 c = cps[i];
    if (k == detail::CharClass::space) {
      pending_space = true;
      continue;
    }
    if (k == detail::CharClass::hyphen) {
      if (!(prev_letter && next_letter)) continue;
      c = 0x2D;
    } else if (k == detail::CharClass::apostrophe) {
      if (!((prev_letter || word_start) && next_letter)) continue;
      c = 0x27;
    }
    if (pending_space && out.length() > 0) out.append(static_cast<UChar>(0x20));
    pending_space = false;
    out.append(c);
  }
  std::string result;
  detail::nfc(out).toUTF8String(result);
  return result;
}

}  // namespace openresp::corpus
