#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "openresp/corpus/tokenize.hpp"
#include "openresp/error.hpp"
#include "openresp/hash.hpp"

namespace openresp::corpus {

// Synthetic ASR error profile. Defaults are the best engine's
// deletion/substitution/insertion rates from the WER comparison.
struct NoiseSpec {
  double del_rate = 0.1397;
  double sub_rate = 0.0919;
  double ins_rate = 0.0154;
  std::uint64_t seed = 0;
  std::vector<std::string> substitution_vocab;
};

struct NoiseTally {
  std::size_t tokens_in = 0;
  std::size_t gaps = 0;
  std::size_t deleted = 0;
  std::size_t substituted = 0;
  std::size_t inserted = 0;

  NoiseTally& operator+=(const NoiseTally& o) noexcept {
    tokens_in += o.tokens_in;
    gaps += o.gaps;
    deleted += o.deleted;
    substituted += o.substituted;
    inserted += o.inserted;
    return *this;
  }
};

inline void validate(const NoiseSpec& spec) {
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in_unit(spec.del_rate) || !in_unit(spec.sub_rate) || !in_unit(spec.ins_rate))
    throw ConfigError("noise rates must lie in [0,1]");
  if (spec.del_rate + spec.sub_rate > 1.0) throw ConfigError("del_rate + sub_rate must not exceed 1");
  if ((spec.sub_rate > 0.0 || spec.ins_rate > 0.0) && spec.substitution_vocab.empty())
    throw ConfigError("substitution_vocab must be non-empty when sub_rate or ins_rate > 0");
}

// Draw order, fixed so that independent implementations agree bit for bit.
// The stream is splitmix64 seeded with spec.seed ^ fnv1a64(response_id);
// uniform() takes the top 53 bits, below(k) = floor(uniform() * k).
//   gap 0: u = uniform(); if u < ins_rate, insert vocab[below(|vocab|)]
//   for each token t_i:
//     u = uniform()
//     u < del                -> drop t_i
//     u < del + sub          -> replace by a draw from vocab without t_i
//                               (below(|vocab'|) over vocab order with t_i
//                               skipped; kept as-is if vocab' is empty)
//     otherwise              -> keep t_i
//     gap i+1: insertion draw as for gap 0
// New tokens get content flag = has_letter(token); retokenize with a
// stopword list when exact content flags matter.
inline TokenizedAnswer inject_noise(const TokenizedAnswer& answer, const NoiseSpec& spec,
                                    NoiseTally* tally = nullptr) {
  validate(spec);
  SplitMix64 rng(spec.seed ^ fnv1a64(answer.response_id));
  const auto& vocab = spec.substitution_vocab;
  NoiseTally t;
  t.tokens_in = answer.tokens.size();
  t.gaps = answer.tokens.size() + 1;

  TokenizedAnswer out;
  out.response_id = answer.response_id;
  auto emit = [&](const std::string& tok, bool flag) {
    out.tokens.push_back(tok);
    out.content_flags.push_back(flag);
  };
  auto maybe_insert = [&] {
    if (rng.uniform() < spec.ins_rate) {
      const auto& tok = vocab[rng.below(vocab.size())];
      emit(tok, has_letter(tok));
      ++t.inserted;
    }
  };

  maybe_insert();
  for (std::size_t i = 0; i < answer.tokens.size(); ++i) {
    const std::string& tok = answer.tokens[i];
    const double u = rng.uniform();
    if (u < spec.del_rate) {
      ++t.deleted;
    } else if (u < spec.del_rate + spec.sub_rate) {
      std::size_t skip = vocab.size();
      for (std::size_t k = 0; k < vocab.size(); ++k) {
        if (vocab[k] == tok) {
          skip = k;
          break;
        }
      }
      const std::size_t pool = vocab.size() - (skip < vocab.size() ? 1 : 0);
      if (pool == 0) {
        emit(tok, answer.content_flags[i]);
      } else {
        std::size_t k = rng.below(pool);
        if (k >= skip) ++k;
        emit(vocab[k], has_letter(vocab[k]));
        ++t.substituted;
      }
    } else {
      emit(tok, answer.content_flags[i]);
    }
    maybe_insert();
  }
  if (tally) *tally += t;
  return out;
}

}  // namespace openresp::corpus
