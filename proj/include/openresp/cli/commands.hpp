#pragma once

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "openresp/agreement/evaluation.hpp"
#include "openresp/asr_eval/deletions.hpp"
#include "openresp/asr_eval/wer.hpp"
#include "openresp/cli/config.hpp"
#include "openresp/corpus/ingest.hpp"
#include "openresp/corpus/noise.hpp"
#include "openresp/corpus/nonresponse.hpp"
#include "openresp/corpus/normalize.hpp"
#include "openresp/corpus/stats.hpp"
#include "openresp/corpus/tokenize.hpp"
#include "openresp/embeddings/hash_embed.hpp"
#include "openresp/embeddings/matrix.hpp"
#include "openresp/hash.hpp"
#include "openresp/io.hpp"
#include "openresp/report/json.hpp"
#include "openresp/report/tables.hpp"
#include "openresp/topic_compare/match.hpp"
#include "openresp/topics/model_io.hpp"
#include "openresp/topics/sweep.hpp"

namespace openresp::cli {

using nlohmann::ordered_json;

enum class OutputFormat { json, markdown, both };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "markdown") return OutputFormat::markdown;
  if (s == "both") return OutputFormat::both;
  throw ConfigError("--format must be json, markdown or both");
}

struct Context {
  RunConfig config;
  OutputFormat format = OutputFormat::both;
  std::ostream* log = &std::cerr;

  void warn(const std::string& msg) const { *log << "warning: " << msg << "\n"; }
  bool want_json() const { return format != OutputFormat::markdown; }
  bool want_markdown() const { return format != OutputFormat::json; }
  std::filesystem::path dir(const std::string& command) const { return config.output_dir / command; }
  void json(const std::filesystem::path& path, const ordered_json& j) const {
    if (want_json()) write_file(path, j.dump(2) + "\n");
  }
  void markdown(const std::filesystem::path& path, const std::string& text) const {
    if (want_markdown()) write_file(path, text);
  }
};

struct NoiseRates {
  std::optional<double> del, sub, ins;
};

namespace detail {

inline std::vector<corpus::Response> load_responses(const RunConfig& c) {
  const auto& p = require(c.paths.responses, "responses");
  return corpus::ingest(p, corpus::format_from_extension(p));
}

inline corpus::Stopwords load_stopwords(const RunConfig& c) {
  return corpus::load_stopwords(require(c.paths.stopwords, "stopwords"));
}

inline std::vector<corpus::NonResponsePattern> load_blocklist(const RunConfig& c) {
  if (!c.paths.blocklist) return corpus::default_blocklist();
  return corpus::load_blocklist(require(c.paths.blocklist, "blocklist"));
}

inline corpus::TokenizedAnswer tokenize(const corpus::Response& r, const corpus::Stopwords& stop) {
  return corpus::tokenize(corpus::normalize(r.raw_text), stop, r.id);
}

inline corpus::TokenizedAnswer content_only(const corpus::TokenizedAnswer& a) {
  corpus::TokenizedAnswer out;
  out.response_id = a.response_id;
  for (std::size_t i = 0; i < a.tokens.size(); ++i)
    if (a.content_flags[i]) {
      out.tokens.push_back(a.tokens[i]);
      out.content_flags.push_back(true);
    }
  return out;
}

// One text per response id: typed text for keyboard answers, the manual
// transcript for speech answers (automatic when no manual one exists).
inline std::vector<const corpus::Response*> primary_texts(const std::vector<corpus::Response>& rs) {
  std::vector<const corpus::Response*> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& r : rs) {
    auto [it, fresh] = slot.emplace(r.id, out.size());
    if (fresh)
      out.push_back(&r);
    else if (r.transcript_source == corpus::TranscriptSource::manual)
      out[it->second] = &r;
  }
  return out;
}

inline std::vector<std::string> in_set(const std::vector<std::string>& ids, const std::set<std::string>& keep) {
  std::vector<std::string> out;
  for (const auto& id : ids)
    if (keep.contains(id)) out.push_back(id);
  return out;
}

inline ordered_json config_echo(const RunConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["embedder"] = c.embedder == Embedder::hash ? "hash" : "file";
  j["dim"] = c.dim;
  j["sweep"] = ordered_json{{"min", c.sweep_min}, {"max", c.sweep_max}, {"min_samples", report::opt(c.min_samples)}};
  j["tfidf_variant"] = topics::to_string(c.tfidf_variant);
  j["coherence_top_n"] = c.coherence_top_n;
  j["content_words_only"] = c.content_words_only;
  return j;
}

}  // namespace detail

// Table 1: words and content words per answer for each input modality.
inline int cmd_stats(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto stop = detail::load_stopwords(cfg);
  const auto responses = detail::load_responses(cfg);
  std::vector<corpus::TokenizedAnswer> answers;
  std::map<std::string, corpus::Modality, std::less<>> modality_of;
  for (const auto* r : detail::primary_texts(responses)) {
    answers.push_back(detail::tokenize(*r, stop));
    modality_of.emplace(r->id, r->modality);
  }
  const auto stats = corpus::corpus_stats(answers, modality_of);
  const auto dir = ctx.dir("stats");
  ctx.json(dir / "stats.json", ordered_json{{"n_answers", answers.size()}, {"stats", report::to_json(stats)}});
  ctx.markdown(dir / "table1.md", report::stats_markdown(stats));
  return 0;
}

// Table 3 plus the deletion analysis: manual transcripts are the reference.
inline int cmd_wer(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto responses = detail::load_responses(cfg);
  const corpus::Stopwords none;
  std::vector<const corpus::Response*> manual;
  std::map<std::string, const corpus::Response*> automatic;
  std::vector<std::string> automatic_order;
  for (const auto& r : responses) {
    if (r.modality != corpus::Modality::speech) continue;
    if (r.transcript_source == corpus::TranscriptSource::manual) {
      manual.push_back(&r);
    } else {
      automatic.emplace(r.id, &r);
      automatic_order.push_back(r.id);
    }
  }
  std::vector<asr_eval::Utterance> utts;
  std::vector<std::string> unmatched_manual, unmatched_automatic;
  std::set<std::string> paired;
  for (const auto* m : manual) {
    auto it = automatic.find(m->id);
    if (it == automatic.end()) {
      unmatched_manual.push_back(m->id);
      continue;
    }
    paired.insert(m->id);
    utts.push_back({m->id, detail::tokenize(*m, none).tokens, detail::tokenize(*it->second, none).tokens});
  }
  for (const auto& id : automatic_order)
    if (!paired.contains(id)) unmatched_automatic.push_back(id);
  for (const auto& id : unmatched_manual) ctx.warn("manual transcript '" + id + "' has no automatic counterpart");
  for (const auto& id : unmatched_automatic) ctx.warn("automatic transcript '" + id + "' has no manual counterpart");
  if (utts.empty()) throw DataError("no response id has both a manual and an automatic transcript");

  const auto wr = asr_eval::wer(utts, cfg.threads);
  const auto deletions = asr_eval::deletion_analysis(wr, cfg.deletion_top_k);
  const auto dir = ctx.dir("wer");
  ordered_json j;
  j["label"] = cfg.asr_label;
  j["n_pairs"] = utts.size();
  j["report"] = report::to_json(wr);
  j["deletions"] = report::to_json(deletions);
  j["unmatched_manual"] = unmatched_manual;
  j["unmatched_automatic"] = unmatched_automatic;
  ctx.json(dir / "wer.json", j);
  ctx.markdown(dir / "table3.md", report::wer_markdown({{cfg.asr_label, wr}}));
  ctx.markdown(dir / "deletions.md", report::deletions_markdown(deletions));
  return 0;
}

// Table 4: rater agreement and the machine rater against majority gold.
inline int cmd_sentiment_eval(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto& ratings_path = require(cfg.paths.ratings, "ratings");
  const auto blocklist = detail::load_blocklist(cfg);
  std::optional<std::vector<corpus::Response>> responses;
  if (cfg.paths.responses) responses = detail::load_responses(cfg);
  auto table = agreement::load_ratings(ratings_path, cfg.sentiment_labels);

  std::set<std::string> drop;
  std::size_t n_nonresponse = 0, n_other_questions = 0;
  if (responses) {
    const std::set<std::string> rated(table.items.begin(), table.items.end());
    const corpus::Stopwords none;
    for (const auto* r : detail::primary_texts(*responses)) {
      if (!rated.contains(r->id)) continue;
      if (!table.question_of.contains(r->id)) table.question_of.emplace(r->id, r->question_id);
      if (corpus::is_nonresponse(detail::tokenize(*r, none), blocklist) && drop.insert(r->id).second)
        ++n_nonresponse;
    }
  }
  const std::set<std::string> wanted(cfg.sentiment_questions.begin(), cfg.sentiment_questions.end());
  for (const auto& item : table.items) {
    auto q = table.question_of.find(item);
    if (q != table.question_of.end() && !wanted.contains(q->second) && drop.insert(item).second) ++n_other_questions;
  }
  if (!drop.empty()) {
    std::erase_if(table.items, [&](const std::string& id) { return drop.contains(id); });
    for (auto& [_, labels] : table.by_rater) std::erase_if(labels, [&](const auto& kv) { return drop.contains(kv.first); });
  }

  agreement::SentimentConfig sc;
  sc.labels = cfg.sentiment_labels;
  sc.neutral = cfg.neutral_label;
  sc.machine_rater = cfg.machine_rater;
  sc.neutral_pct = cfg.neutral_pct;
  sc.rule = cfg.neutrality_rule;
  for (const auto& [a, b] : cfg.question_pairs) {
    sc.question_pairs[a] = b;
    sc.question_pairs[b] = a;
  }
  const auto ev = agreement::evaluate_sentiment(table, sc);
  const auto dir = ctx.dir("sentiment-eval");
  ordered_json j;
  j["dropped_nonresponses"] = n_nonresponse;
  j["dropped_other_questions"] = n_other_questions;
  j["evaluation"] = report::to_json(ev);
  ctx.json(dir / "sentiment.json", j);
  ctx.markdown(dir / "table4.md", report::sentiment_markdown(ev));
  return 0;
}

inline const char* dataset_name(corpus::TranscriptSource s) {
  return s == corpus::TranscriptSource::manual ? "manual" : "automatic";
}

// Topic model per question set. Keyboard answers are shared by both datasets;
// speech answers come from the chosen transcript source.
inline int cmd_topics(const Context& ctx, corpus::TranscriptSource dataset) {
  const auto& cfg = ctx.config;
  const std::string name = dataset_name(dataset);
  const auto stop = detail::load_stopwords(cfg);
  std::optional<embeddings::EmbeddingMatrix> vectors;
  if (cfg.embedder == Embedder::file) {
    const auto& p = dataset == corpus::TranscriptSource::manual ? cfg.paths.vectors_manual : cfg.paths.vectors_automatic;
    vectors = embeddings::load_vectors(require(p, dataset == corpus::TranscriptSource::manual ? "vectors_manual"
                                                                                              : "vectors_automatic"));
  }
  const auto blocklist = detail::load_blocklist(cfg);
  const auto responses = detail::load_responses(cfg);
  const auto dir = ctx.dir("topics") / name;

  bool failed = false;
  ordered_json summary = ordered_json::array();
  for (const auto& set : cfg.question_sets) {
    const std::set<std::string> qs(set.questions.begin(), set.questions.end());
    std::vector<corpus::TokenizedAnswer> full;
    std::vector<std::string> speech;
    std::size_t n_nonresponse = 0;
    for (const auto& r : responses) {
      if (!qs.contains(r.question_id)) continue;
      const bool take = r.modality == corpus::Modality::keyboard || r.transcript_source == dataset;
      if (!take) continue;
      auto a = detail::tokenize(r, stop);
      if (corpus::is_nonresponse(a, blocklist)) {
        ++n_nonresponse;
        continue;
      }
      if (r.modality == corpus::Modality::speech) speech.push_back(r.id);
      full.push_back(std::move(a));
    }
    ordered_json row{{"question_set", set.name}, {"n_answers", full.size()}, {"n_nonresponses", n_nonresponse}};
    if (full.size() < 2) {
      ctx.warn("question set '" + set.name + "' has " + std::to_string(full.size()) + " answers in the " + name +
               " dataset; skipped");
      row["status"] = "skipped";
      summary.push_back(row);
      continue;
    }

    std::vector<std::string> unembeddable;
    embeddings::EmbeddingMatrix matrix(cfg.dim);
    if (vectors) {
      std::vector<std::string> ids;
      for (const auto& a : full) ids.push_back(a.response_id);
      matrix = vectors->select(ids);
    } else {
      auto h = embeddings::hash_embed_all(full, cfg.dim, cfg.threads);
      matrix = std::move(h.matrix);
      unembeddable = std::move(h.skipped);
    }
    const std::set<std::string> skipped(unembeddable.begin(), unembeddable.end());
    std::vector<corpus::TokenizedAnswer> docs;
    for (const auto& a : full)
      if (!skipped.contains(a.response_id)) docs.push_back(cfg.content_words_only ? detail::content_only(a) : a);
    std::set<std::string> embedded;
    for (const auto& d : docs) embedded.insert(d.response_id);

    topics::TopicModelFile f;
    f.dataset = name;
    f.question_set = set.name;
    f.speech_ids = detail::in_set(speech, embedded);
    f.unembeddable = unembeddable;
    f.config = detail::config_echo(cfg);
    try {
      topics::SweepConfig sc;
      sc.min_size = cfg.sweep_min;
      sc.max_size = cfg.sweep_max;
      sc.min_samples = cfg.min_samples;
      sc.variant = cfg.tfidf_variant;
      sc.coherence_top_n = cfg.coherence_top_n;
      sc.threads = cfg.threads;
      auto result = topics::sweep(docs, matrix, sc);
      f.model = std::move(result.model);
      f.sweep = std::move(result.sweep);
    } catch (const ComputationError& e) {
      *ctx.log << "error: question set '" << set.name << "' (" << name << "): " << e.what() << "\n";
      failed = true;
      row["status"] = "failed";
      row["message"] = e.what();
      summary.push_back(row);
      continue;
    }
    // The model file feeds the compare command, so it is written in every format.
    topics::store_topic_model(dir / (set.name + ".json"), f);
    ctx.markdown(dir / (set.name + ".md"), report::topics_markdown(f));
    row["status"] = "ok";
    row["n_topics"] = f.model.topics.size();
    row["min_cluster_size"] = f.model.min_cluster_size;
    row["coherence_umass"] = report::opt(f.model.coherence_umass);
    summary.push_back(row);
  }
  ctx.json(dir / "summary.json", ordered_json{{"dataset", name}, {"sets", summary}});
  return failed ? 3 : 0;
}

// Table 5: manual vs automatic models per question set, in config order.
inline int cmd_compare(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto models = cfg.models_dir();
  topic_compare::CompareConfig cc;
  cc.rho_threshold = cfg.rho_threshold;
  cc.p_threshold = cfg.p_threshold;
  cc.spearman.mode = cfg.rank_mode;
  cc.spearman.p_method = cfg.p_method;
  cc.spearman.permutations = cfg.permutations;
  cc.spearman.seed = derive_seed(cfg.seed, "topic_compare:permutation");
  cc.threads = cfg.threads;

  std::vector<report::CompareRow> rows;
  std::string pairs_md;
  for (const auto& set : cfg.question_sets) {
    auto load = [&](const char* dataset) {
      const auto p = models / dataset / (set.name + ".json");
      if (!std::filesystem::exists(p)) throw DataError("missing topic model file: " + p.string());
      return topics::load_topic_model(p);
    };
    const auto a = load("manual");
    const auto b = load("automatic");
    const std::set<std::string> in_b(b.speech_ids.begin(), b.speech_ids.end());
    const auto ids = detail::in_set(a.speech_ids, in_b);
    auto r = topic_compare::match_models(a.model, b.model, ids, cc);

    pairs_md += "## " + report::capitalized(set.name) + "\n\n";
    for (const auto& m : r.matched) {
      pairs_md += report::topic_pair_markdown(*a.model.find(m.topic_a), *b.model.find(m.topic_b), m.rho);
      pairs_md += "\n";
    }
    pairs_md += report::pairs_markdown(r) + "\n";
    rows.push_back({set.name, std::move(r)});
  }
  const auto dir = ctx.dir("compare");
  ordered_json cfg_j{{"rho_threshold", cfg.rho_threshold},
                     {"p_threshold", cfg.p_threshold},
                     {"rank_mode", cfg.rank_mode == topic_compare::RankMode::union_tied ? "union" : "intersection"},
                     {"p_value", cfg.p_method == topic_compare::PValueMethod::permutation ? "permutation" : "t"}};
  ctx.json(dir / "compare.json", ordered_json{{"config", cfg_j}, {"answer_sets", report::to_json(rows)}});
  ctx.markdown(dir / "table5.md", report::compare_markdown(rows));
  ctx.markdown(dir / "pairs.md", pairs_md);
  return 0;
}

// Writes a responses file whose automatic transcripts are noised copies of the
// manual ones. Keyboard answers and manual transcripts pass through unchanged.
inline int cmd_noise(const Context& ctx, const NoiseRates& rates = {}) {
  const auto& cfg = ctx.config;
  corpus::NoiseSpec spec;
  spec.del_rate = rates.del.value_or(cfg.noise_del);
  spec.sub_rate = rates.sub.value_or(cfg.noise_sub);
  spec.ins_rate = rates.ins.value_or(cfg.noise_ins);
  spec.seed = derive_seed(cfg.seed, "corpus:noise");
  {
    corpus::NoiseSpec check = spec;
    check.substitution_vocab = {"x"};
    corpus::validate(check);
  }
  const auto responses = detail::load_responses(cfg);
  const corpus::Stopwords none;
  std::set<std::string> vocab;
  for (const auto& r : responses)
    if (r.transcript_source == corpus::TranscriptSource::manual)
      for (auto& t : detail::tokenize(r, none).tokens) vocab.insert(std::move(t));
  spec.substitution_vocab.assign(vocab.begin(), vocab.end());
  if (spec.substitution_vocab.empty() && (spec.sub_rate > 0.0 || spec.ins_rate > 0.0))
    throw DataError("no manual speech transcripts to draw substitution words from");

  std::vector<corpus::Response> out;
  corpus::NoiseTally tally;
  for (const auto& r : responses) {
    if (r.transcript_source == corpus::TranscriptSource::automatic) continue;
    out.push_back(r);
    if (r.transcript_source != corpus::TranscriptSource::manual) continue;
    const auto clean = detail::tokenize(r, none);
    const auto noised = corpus::inject_noise(clean, spec, &tally);
    corpus::Response a = r;
    a.transcript_source = corpus::TranscriptSource::automatic;
    if (noised.tokens != clean.tokens) {
      a.raw_text.clear();
      for (const auto& t : noised.tokens) a.raw_text += (a.raw_text.empty() ? "" : " ") + t;
    }
    out.push_back(std::move(a));
  }
  const auto dir = ctx.dir("noise");
  write_file(dir / "responses.jsonl", corpus::to_jsonl(out));
  auto rate = [&](std::size_t k) {
    return tally.tokens_in ? static_cast<double>(k) / static_cast<double>(tally.tokens_in) : 0.0;
  };
  ordered_json j;
  j["seed"] = cfg.seed;
  j["rates"] = ordered_json{{"del", spec.del_rate}, {"sub", spec.sub_rate}, {"ins", spec.ins_rate}};
  j["tokens_in"] = tally.tokens_in;
  j["deleted"] = tally.deleted;
  j["substituted"] = tally.substituted;
  j["inserted"] = tally.inserted;
  j["measured"] = ordered_json{{"del", rate(tally.deleted)}, {"sub", rate(tally.substituted)}, {"ins", rate(tally.inserted)}};
  ctx.json(dir / "noise.json", j);
  ctx.markdown(dir / "noise.md",
               report::markdown_table({"", "del", "sub", "ins"},
                                      {report::Align::left, report::Align::right, report::Align::right,
                                       report::Align::right},
                                      {{"Requested", report::fixed(100 * spec.del_rate), report::fixed(100 * spec.sub_rate),
                                        report::fixed(100 * spec.ins_rate)},
                                       {"Measured", report::fixed(100 * rate(tally.deleted)),
                                        report::fixed(100 * rate(tally.substituted)),
                                        report::fixed(100 * rate(tally.inserted))}}));
  return 0;
}

// stats, wer, sentiment-eval (when ratings are configured), topics for both
// datasets, compare. Stops at the first failing step.
inline int cmd_all(const Context& ctx) {
  int rc = cmd_stats(ctx);
  if (rc) return rc;
  rc = cmd_wer(ctx);
  if (rc) return rc;
  if (ctx.config.paths.ratings) {
    rc = cmd_sentiment_eval(ctx);
    if (rc) return rc;
  } else {
    ctx.warn("paths.ratings is not configured; sentiment-eval skipped");
  }
  rc = std::max(cmd_topics(ctx, corpus::TranscriptSource::manual), cmd_topics(ctx, corpus::TranscriptSource::automatic));
  if (rc) return rc;
  return cmd_compare(ctx);
}

}  // namespace openresp::cli
