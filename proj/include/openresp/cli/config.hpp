#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "openresp/agreement/filters.hpp"
#include "openresp/corpus/noise.hpp"
#include "openresp/error.hpp"
#include "openresp/io.hpp"
#include "openresp/topic_compare/spearman.hpp"
#include "openresp/topics/model.hpp"

namespace openresp::cli {

enum class Embedder { hash, file };

struct QuestionSet {
  std::string name;
  std::vector<std::string> questions;
};

// Audio question id -> keyboard question id, as asked in the two conditions.
inline const std::vector<std::pair<std::string, std::string>>& default_question_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs{
      {"Q13", "Q16"}, {"Q14", "Q17"}, {"Q15", "Q18"}, {"Q20", "Q23"}, {"Q21", "Q24"},
      {"Q22", "Q25"}, {"Q27", "Q30"}, {"Q28", "Q31"}, {"Q29", "Q32"}, {"Q34", "Q37"},
      {"Q35", "Q38"}, {"Q36", "Q39"}, {"Q41", "Q44"}, {"Q42", "Q45"}, {"Q43", "Q46"}};
  return pairs;
}

inline std::vector<QuestionSet> default_question_sets() {
  return {{"democracy", {"Q13", "Q14", "Q15", "Q16", "Q17", "Q18"}},
          {"europe", {"Q20", "Q21", "Q22", "Q23", "Q24", "Q25"}},
          {"trust", {"Q27", "Q28", "Q29", "Q30", "Q31", "Q32"}},
          {"marriage",
           {"Q34", "Q35", "Q36", "Q37", "Q38", "Q39", "Q41", "Q42", "Q43", "Q44", "Q45", "Q46"}}};
}

// Tab-separated "audio<TAB>keyboard" lines; '#' starts a comment line.
inline std::vector<std::pair<std::string, std::string>> parse_question_pairs(std::string_view text,
                                                                             const std::string& source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(source, line_no, "expected '<audio id>\\t<keyboard id>'");
    out.emplace_back(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return out;
}

struct Paths {
  std::optional<std::filesystem::path> responses;
  std::optional<std::filesystem::path> ratings;
  std::optional<std::filesystem::path> vectors_manual;
  std::optional<std::filesystem::path> vectors_automatic;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> blocklist;
  std::optional<std::filesystem::path> question_pairs;
  std::optional<std::filesystem::path> models;  // default: <output_dir>/topics
};

struct RunConfig {
  Paths paths;
  std::filesystem::path output_dir = "out";
  std::vector<QuestionSet> question_sets = default_question_sets();
  std::vector<std::pair<std::string, std::string>> question_pairs = default_question_pairs();

  double rho_threshold = 0.7;
  double p_threshold = 0.05;
  double neutral_pct = 50.0;

  std::size_t sweep_min = 2;
  std::size_t sweep_max = 50;
  std::optional<std::size_t> min_samples;
  Embedder embedder = Embedder::hash;
  std::size_t dim = 512;
  std::uint64_t seed = 0;
  topics::TfidfVariant tfidf_variant = topics::TfidfVariant::class_based;
  std::size_t coherence_top_n = 20;
  bool content_words_only = true;
  std::size_t top_terms = 100;

  std::vector<std::string> sentiment_labels{"negative", "positive", "neutral"};
  std::string neutral_label = "neutral";
  std::optional<std::string> machine_rater;
  std::vector<std::string> sentiment_questions{"Q13", "Q15", "Q20", "Q22", "Q29",
                                               "Q16", "Q18", "Q23", "Q25", "Q32"};
  agreement::NeutralityRule neutrality_rule = agreement::NeutralityRule::majority;

  std::string asr_label = "ASR";
  std::size_t deletion_top_k = 25;

  double noise_del = 0.1397;
  double noise_sub = 0.0919;
  double noise_ins = 0.0154;

  topic_compare::RankMode rank_mode = topic_compare::RankMode::union_tied;
  topic_compare::PValueMethod p_method = topic_compare::PValueMethod::t_approximation;
  std::size_t permutations = 10000;

  unsigned threads = 1;

  std::filesystem::path models_dir() const { return paths.models.value_or(output_dir / "topics"); }
};

namespace detail {

using nlohmann::ordered_json;

inline void check_keys(const ordered_json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, _] : obj.items())
    if (!allowed.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
void read(const ordered_json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

inline void read_path(const ordered_json& obj, const char* key, std::optional<std::filesystem::path>& out,
                      const std::filesystem::path& base) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  if (!obj.at(key).is_string()) throw ConfigError("paths." + std::string(key) + " must be a string");
  std::filesystem::path p = obj.at(key).get<std::string>();
  out = p.is_absolute() ? p : base / p;
}

}  // namespace detail

inline void validate(const RunConfig& c) {
  if (c.sweep_min < 2 || c.sweep_max < c.sweep_min || c.sweep_max > 10000)
    throw ConfigError("sweep range must satisfy 2 <= min <= max <= 10000");
  if (c.min_samples && *c.min_samples < 1) throw ConfigError("min_samples must be >= 1");
  if (c.dim < 8) throw ConfigError("dim must be >= 8");
  if (c.rho_threshold < -1.0 || c.rho_threshold > 1.0) throw ConfigError("rho threshold must lie in [-1, 1]");
  if (c.p_threshold <= 0.0 || c.p_threshold > 1.0) throw ConfigError("p threshold must lie in (0, 1]");
  if (c.neutral_pct < 0.0 || c.neutral_pct > 100.0) throw ConfigError("neutral_pct must lie in [0, 100]");
  if (c.coherence_top_n < 2) throw ConfigError("coherence top_n must be >= 2");
  if (c.top_terms < 1) throw ConfigError("top_terms must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.permutations < 1) throw ConfigError("permutations must be >= 1");
  corpus::NoiseSpec ns{c.noise_del, c.noise_sub, c.noise_ins, 0, {"x"}};
  corpus::validate(ns);
  static const std::regex qid("Q[0-9]+");
  auto check_q = [](const std::string& q) {
    if (!std::regex_match(q, qid)) throw ConfigError("question id '" + q + "' does not match Q<number>");
  };
  std::set<std::string> names;
  for (const auto& s : c.question_sets) {
    if (s.name.empty() || !names.insert(s.name).second) throw ConfigError("question set names must be unique");
    for (const auto& q : s.questions) check_q(q);
  }
  for (const auto& q : c.sentiment_questions) check_q(q);
  for (const auto& [a, b] : c.question_pairs) {
    check_q(a);
    check_q(b);
  }
  if (std::find(c.sentiment_labels.begin(), c.sentiment_labels.end(), c.neutral_label) == c.sentiment_labels.end())
    throw ConfigError("neutral label must be one of the sentiment labels");
}

// Relative paths resolve against `base` (the config file's directory).
inline RunConfig parse_config(std::string_view text, const std::filesystem::path& base = {},
                              const std::string& source = "<config>") {
  using detail::ordered_json;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  RunConfig c;
  detail::check_keys(j,
                     {"paths", "output_dir", "question_sets", "thresholds", "sweep", "embedder", "dim", "seed",
                      "tfidf_variant", "coherence", "topics", "sentiment", "wer", "noise", "compare", "threads"},
                     "config");
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    detail::check_keys(p,
                       {"responses", "ratings", "vectors_manual", "vectors_automatic", "stopwords", "blocklist",
                        "question_pairs", "models"},
                       "paths");
    detail::read_path(p, "responses", c.paths.responses, base);
    detail::read_path(p, "ratings", c.paths.ratings, base);
    detail::read_path(p, "vectors_manual", c.paths.vectors_manual, base);
    detail::read_path(p, "vectors_automatic", c.paths.vectors_automatic, base);
    detail::read_path(p, "stopwords", c.paths.stopwords, base);
    detail::read_path(p, "blocklist", c.paths.blocklist, base);
    detail::read_path(p, "question_pairs", c.paths.question_pairs, base);
    detail::read_path(p, "models", c.paths.models, base);
  }
  if (j.contains("output_dir")) {
    std::optional<std::filesystem::path> out;
    detail::read_path(j, "output_dir", out, base);
    if (out) c.output_dir = *out;
  }
  if (j.contains("question_sets")) {
    const auto& qs = j["question_sets"];
    if (!qs.is_object()) throw ConfigError("question_sets must map set names to question id lists");
    c.question_sets.clear();
    for (const auto& [name, ids] : qs.items()) {
      QuestionSet s{name, {}};
      detail::read(qs, name.c_str(), s.questions, "question_sets");
      c.question_sets.push_back(std::move(s));
    }
  }
  if (j.contains("thresholds")) {
    const auto& t = j["thresholds"];
    detail::check_keys(t, {"rho", "p", "neutral_pct"}, "thresholds");
    detail::read(t, "rho", c.rho_threshold, "thresholds");
    detail::read(t, "p", c.p_threshold, "thresholds");
    detail::read(t, "neutral_pct", c.neutral_pct, "thresholds");
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    detail::check_keys(s, {"min", "max", "min_samples"}, "sweep");
    detail::read(s, "min", c.sweep_min, "sweep");
    detail::read(s, "max", c.sweep_max, "sweep");
    if (s.contains("min_samples") && !s["min_samples"].is_null()) {
      std::size_t ms = 0;
      detail::read(s, "min_samples", ms, "sweep");
      c.min_samples = ms;
    }
  }
  if (j.contains("embedder")) {
    std::string e;
    detail::read(j, "embedder", e, "config");
    if (e == "hash")
      c.embedder = Embedder::hash;
    else if (e == "file")
      c.embedder = Embedder::file;
    else
      throw ConfigError("embedder must be 'hash' or 'file'");
  }
  detail::read(j, "dim", c.dim, "config");
  detail::read(j, "seed", c.seed, "config");
  if (j.contains("tfidf_variant")) {
    std::string v;
    detail::read(j, "tfidf_variant", v, "config");
    c.tfidf_variant = topics::parse_tfidf_variant(v);
  }
  if (j.contains("coherence")) {
    const auto& co = j["coherence"];
    detail::check_keys(co, {"top_n"}, "coherence");
    detail::read(co, "top_n", c.coherence_top_n, "coherence");
  }
  if (j.contains("topics")) {
    const auto& t = j["topics"];
    detail::check_keys(t, {"content_words_only", "top_terms"}, "topics");
    detail::read(t, "content_words_only", c.content_words_only, "topics");
    detail::read(t, "top_terms", c.top_terms, "topics");
  }
  if (j.contains("sentiment")) {
    const auto& s = j["sentiment"];
    detail::check_keys(s, {"labels", "neutral", "machine_rater", "questions", "neutrality_rule"}, "sentiment");
    detail::read(s, "labels", c.sentiment_labels, "sentiment");
    detail::read(s, "neutral", c.neutral_label, "sentiment");
    if (s.contains("machine_rater") && !s["machine_rater"].is_null()) {
      std::string m;
      detail::read(s, "machine_rater", m, "sentiment");
      c.machine_rater = m;
    }
    detail::read(s, "questions", c.sentiment_questions, "sentiment");
    if (s.contains("neutrality_rule")) {
      std::string r;
      detail::read(s, "neutrality_rule", r, "sentiment");
      if (r == "majority")
        c.neutrality_rule = agreement::NeutralityRule::majority;
      else if (r == "any")
        c.neutrality_rule = agreement::NeutralityRule::any;
      else
        throw ConfigError("sentiment.neutrality_rule must be 'majority' or 'any'");
    }
  }
  if (j.contains("wer")) {
    const auto& w = j["wer"];
    detail::check_keys(w, {"label", "top_k"}, "wer");
    detail::read(w, "label", c.asr_label, "wer");
    detail::read(w, "top_k", c.deletion_top_k, "wer");
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    detail::check_keys(n, {"del_rate", "sub_rate", "ins_rate"}, "noise");
    detail::read(n, "del_rate", c.noise_del, "noise");
    detail::read(n, "sub_rate", c.noise_sub, "noise");
    detail::read(n, "ins_rate", c.noise_ins, "noise");
  }
  if (j.contains("compare")) {
    const auto& cmp = j["compare"];
    detail::check_keys(cmp, {"rank_mode", "p_value", "permutations"}, "compare");
    if (cmp.contains("rank_mode")) {
      std::string m;
      detail::read(cmp, "rank_mode", m, "compare");
      if (m == "union")
        c.rank_mode = topic_compare::RankMode::union_tied;
      else if (m == "intersection")
        c.rank_mode = topic_compare::RankMode::intersection;
      else
        throw ConfigError("compare.rank_mode must be 'union' or 'intersection'");
    }
    if (cmp.contains("p_value")) {
      std::string m;
      detail::read(cmp, "p_value", m, "compare");
      if (m == "t")
        c.p_method = topic_compare::PValueMethod::t_approximation;
      else if (m == "permutation")
        c.p_method = topic_compare::PValueMethod::permutation;
      else
        throw ConfigError("compare.p_value must be 't' or 'permutation'");
    }
    detail::read(cmp, "permutations", c.permutations, "compare");
  }
  detail::read(j, "threads", c.threads, "config");
  if (c.paths.question_pairs) {
    if (!std::filesystem::exists(*c.paths.question_pairs))
      throw ConfigError("question pair file not found: " + c.paths.question_pairs->string());
    c.question_pairs = parse_question_pairs(read_file(*c.paths.question_pairs), c.paths.question_pairs->string());
  }
  validate(c);
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path(), path.string());
}

// Throws ConfigError when a required input is not configured or missing.
inline const std::filesystem::path& require(const std::optional<std::filesystem::path>& p, const char* what) {
  if (!p) throw ConfigError(std::string("paths.") + what + " is not configured");
  if (!std::filesystem::exists(*p)) throw ConfigError(std::string(what) + " file not found: " + p->string());
  return *p;
}

}  // namespace openresp::cli
