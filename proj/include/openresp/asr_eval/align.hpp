#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace openresp::asr_eval {

enum class EditKind { correct, substitute, del, insert };

inline const char* to_string(EditKind k) noexcept {
  switch (k) {
    case EditKind::correct: return "C";
    case EditKind::substitute: return "S";
    case EditKind::del: return "D";
    case EditKind::insert: return "I";
  }
  return "?";
}

struct EditOp {
  EditKind kind;
  std::optional<std::string> ref;
  std::optional<std::string> hyp;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t correct = 0;
  std::size_t n_ref = 0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

  EditCounts& operator+=(const EditCounts& o) noexcept {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    correct += o.correct;
    n_ref += o.n_ref;
    return *this;
  }

  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

struct AlignmentResult {
  std::vector<EditOp> ops;  // reference order
  EditCounts counts;
};

// Minimal unit-cost edit alignment (Levenshtein over tokens). When several
// minimal alignments exist the backtrace, walking from the end, prefers
// correct > substitute > delete > insert.
inline AlignmentResult align(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> d((n + 1) * w);
  for (std::size_t i = 0; i <= n; ++i) d[i * w] = i;
  for (std::size_t j = 0; j <= m; ++j) d[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i * w + j] = std::min({diag, d[(i - 1) * w + j] + 1, d[i * w + j - 1] + 1});
    }
  }

  AlignmentResult out;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t cur = d[i * w + j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && cur == d[(i - 1) * w + j - 1]) {
      out.ops.push_back({EditKind::correct, ref[i - 1], hyp[j - 1]});
      ++out.counts.correct;
      --i, --j;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] && cur == d[(i - 1) * w + j - 1] + 1) {
      out.ops.push_back({EditKind::substitute, ref[i - 1], hyp[j - 1]});
      ++out.counts.substitutions;
      --i, --j;
    } else if (i > 0 && cur == d[(i - 1) * w + j] + 1) {
      out.ops.push_back({EditKind::del, ref[i - 1], std::nullopt});
      ++out.counts.deletions;
      --i;
    } else {
      out.ops.push_back({EditKind::insert, std::nullopt, hyp[j - 1]});
      ++out.counts.insertions;
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  out.counts.n_ref = n;
  return out;
}

// Rebuilds (ref, hyp) from an op sequence; used to check that ops replay.
inline std::pair<std::vector<std::string>, std::vector<std::string>> replay(const std::vector<EditOp>& ops) {
  std::pair<std::vector<std::string>, std::vector<std::string>> out;
  for (const auto& op : ops) {
    if (op.ref) out.first.push_back(*op.ref);
    if (op.hyp) out.second.push_back(*op.hyp);
  }
  return out;
}

}  // namespace openresp::asr_eval
