#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/utf8.h>

#include "openresp/corpus/tokenize.hpp"
#include "openresp/embeddings/matrix.hpp"
#include "openresp/error.hpp"
#include "openresp/hash.hpp"
#include "openresp/parallel.hpp"

namespace openresp::embeddings {

// Signed feature hashing of character n-grams (n = 3, 4, 5, in that order,
// left to right) over the space-joined tokens. Characters are Unicode code
// points; each n-gram is hashed as its UTF-8 bytes with fnv1a64.
//   bucket = h mod dim, sign = bit 63 of h ? -1 : +1
// The accumulated vector is L2-normalized; a zero accumulation is an error.
inline std::vector<double> hash_embed(const corpus::TokenizedAnswer& answer, std::size_t dim = 512) {
  if (dim < 8) throw ConfigError("hash_embed needs dim >= 8");
  std::string text;
  for (std::size_t i = 0; i < answer.tokens.size(); ++i) {
    if (i) text += ' ';
    text += answer.tokens[i];
  }
  // Byte offset of each code point, plus the end offset.
  std::vector<std::size_t> starts;
  {
    const auto* s = reinterpret_cast<const uint8_t*>(text.data());
    const auto len = static_cast<int32_t>(text.size());
    for (int32_t i = 0; i < len;) {
      starts.push_back(static_cast<std::size_t>(i));
      U8_FWD_1(s, i, len);
    }
    starts.push_back(text.size());
  }
  const std::size_t n_cp = starts.size() - 1;

  std::vector<double> v(dim, 0.0);
  for (std::size_t n = 3; n <= 5; ++n) {
    for (std::size_t i = 0; i + n <= n_cp; ++i) {
      const std::uint64_t h = fnv1a64(std::string_view(text).substr(starts[i], starts[i + n] - starts[i]));
      v[h % dim] += (h >> 63) ? -1.0 : 1.0;
    }
  }
  double ss = 0.0;
  for (double x : v) ss += x * x;
  if (ss == 0.0)
    throw DataError("cannot embed answer '" + answer.response_id + "': no character n-grams survive hashing");
  const double norm = std::sqrt(ss);
  for (double& x : v) x /= norm;
  return v;
}

struct HashEmbedding {
  EmbeddingMatrix matrix;
  std::vector<std::string> skipped;  // answers with a zero accumulation
};

// Embeds answers in input order. Answers that cannot be embedded are listed
// in `skipped` instead of aborting the batch.
inline HashEmbedding hash_embed_all(const std::vector<corpus::TokenizedAnswer>& answers, std::size_t dim = 512,
                                    unsigned threads = 1) {
  std::vector<std::vector<double>> rows(answers.size());
  std::vector<char> ok(answers.size(), 0);
  parallel_for(answers.size(), threads, [&](std::size_t i) {
    try {
      rows[i] = hash_embed(answers[i], dim);
      ok[i] = 1;
    } catch (const DataError&) {
    }
  });
  HashEmbedding out{EmbeddingMatrix(dim), {}};
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (ok[i])
      out.matrix.add_row(answers[i].response_id, rows[i]);
    else
      out.skipped.push_back(answers[i].response_id);
  }
  out.matrix.normalize_rows();
  return out;
}

}  // namespace openresp::embeddings
