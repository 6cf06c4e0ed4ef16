#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace openresp::report {

inline constexpr const char* undefined_cell = "–";  // en dash

// 43216 -> "43,216"
inline std::string thousands(std::size_t n) {
  std::string digits = std::to_string(n), out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

inline std::string fixed(double x, int decimals = 2) {
  if (x == 0.0) x = 0.0;  // no "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

inline std::string fixed(const std::optional<double>& x, int decimals = 2) {
  return x ? fixed(*x, decimals) : undefined_cell;
}

inline std::string percent(const std::optional<double>& x, int decimals = 2) {
  return x ? fixed(*x, decimals) + "%" : undefined_cell;
}

// Whole numbers print without decimals, halves (even-length medians) with one.
inline std::string median_cell(const std::optional<double>& x) {
  if (!x) return undefined_cell;
  return *x == std::floor(*x) ? thousands(static_cast<std::size_t>(*x)) : fixed(*x, 1);
}

// Correlation in the ".96" style, sign kept.
inline std::string correlation(double r) {
  std::string s = fixed(r, 2);
  if (s.rfind("0.", 0) == 0) return s.substr(1);
  if (s.rfind("-0.", 0) == 0) return "-" + s.substr(2);
  return s;
}

enum class Align { left, right };

inline std::string markdown_table(const std::vector<std::string>& header, const std::vector<Align>& align,
                                  const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s = "|";
    for (const auto& c : cells) s += " " + c + " |";
    return s + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (std::size_t i = 0; i < header.size(); ++i) out += i < align.size() && align[i] == Align::right ? "---:|" : "---|";
  out += "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

}  // namespace openresp::report
