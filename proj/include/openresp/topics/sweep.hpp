#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "openresp/corpus/tokenize.hpp"
#include "openresp/density_cluster/hdbscan.hpp"
#include "openresp/embeddings/matrix.hpp"
#include "openresp/error.hpp"
#include "openresp/parallel.hpp"
#include "openresp/topics/coherence.hpp"
#include "openresp/topics/tfidf.hpp"

namespace openresp::topics {

struct SweepConfig {
  std::size_t min_size = 2;
  std::size_t max_size = 50;
  std::optional<std::size_t> min_samples;  // default: the candidate's min_cluster_size
  TfidfVariant variant = TfidfVariant::class_based;
  std::size_t coherence_top_n = 20;
  unsigned threads = 1;
};

struct SweepCandidate {
  std::size_t min_cluster_size = 0;
  std::size_t min_samples = 0;
  std::size_t n_topics = 0;
  std::size_t n_outliers = 0;
  std::optional<double> coherence;  // none when n_topics <= 1 or nothing scoreable
  std::size_t skipped_pairs = 0;

  friend bool operator==(const SweepCandidate&, const SweepCandidate&) = default;
};

struct CoherenceSweep {
  std::vector<SweepCandidate> evaluated;  // ascending min_cluster_size
  std::optional<std::size_t> selected;
};

struct SweepResult {
  CoherenceSweep sweep;
  TopicModel model;
  density_cluster::ClusterResult clusters;
};

// Runs HDBSCAN -> cluster TF-IDF -> u_mass for each minimum cluster size and
// keeps the most coherent model with more than one topic (ties: smallest
// size). min_samples is clamped to n - 1 for small inputs.
inline SweepResult sweep(const std::vector<corpus::TokenizedAnswer>& answers,
                         const embeddings::EmbeddingMatrix& vectors, const SweepConfig& cfg = {}) {
  if (cfg.min_size < 2 || cfg.max_size < cfg.min_size) throw ConfigError("sweep range must satisfy 2 <= min <= max");
  if (answers.size() != vectors.size()) throw DataError("sweep: answers and vectors differ in length");
  for (std::size_t i = 0; i < answers.size(); ++i)
    if (answers[i].response_id != vectors.ids()[i])
      throw DataError("sweep: vector row " + std::to_string(i) + " is '" + vectors.ids()[i] + "', expected '" +
                      answers[i].response_id + "'");
  const std::size_t n = answers.size();
  if (n < 2) throw ComputationError("sweep: need at least 2 answers, got " + std::to_string(n));

  const auto dist = density_cluster::DistanceMatrix::euclidean(vectors, cfg.threads);
  auto samples_for = [&](std::size_t size) { return std::min(cfg.min_samples.value_or(size), n - 1); };
  std::size_t k_max = 0;
  for (std::size_t s = cfg.min_size; s <= cfg.max_size; ++s) k_max = std::max(k_max, samples_for(s));
  const density_cluster::NeighbourTable nn(dist, k_max > 0 ? k_max - 1 : 0, cfg.threads);
  const DocumentIndex index(answers);

  const std::size_t count = cfg.max_size - cfg.min_size + 1;
  std::vector<SweepCandidate> cands(count);
  std::vector<std::optional<TopicModel>> models(count);
  std::vector<density_cluster::ClusterResult> clusterings(count);
  parallel_for(count, cfg.threads, [&](std::size_t k) {
    const std::size_t size = cfg.min_size + k;
    SweepCandidate& c = cands[k];
    c.min_cluster_size = size;
    c.min_samples = samples_for(size);
    clusterings[k] = density_cluster::hdbscan(dist, nn, {size, c.min_samples, false});
    c.n_topics = clusterings[k].n_clusters;
    c.n_outliers = clusterings[k].outlier_count();
    if (c.n_topics <= 1) return;
    TopicModel model = cluster_tfidf(answers, clusterings[k].labels, cfg.variant);
    model.min_cluster_size = size;
    try {
      const auto coh = umass_coherence(model, index, cfg.coherence_top_n);
      c.coherence = coh.score;
      c.skipped_pairs = coh.skipped_pairs;
      model.coherence_umass = coh.score;
    } catch (const ComputationError&) {
      return;
    }
    models[k] = std::move(model);
  });

  SweepResult out;
  out.sweep.evaluated = cands;
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < count; ++k) {
    if (cands[k].n_topics <= 1 || !cands[k].coherence) continue;
    if (!best || *cands[k].coherence > *cands[*best].coherence) best = k;
  }
  if (!best)
    throw ComputationError("sweep: no minimum cluster size in [" + std::to_string(cfg.min_size) + ", " +
                           std::to_string(cfg.max_size) + "] produced more than one topic");
  out.sweep.selected = cands[*best].min_cluster_size;
  out.model = std::move(*models[*best]);
  out.clusters = std::move(clusterings[*best]);
  return out;
}

}  // namespace openresp::topics
