#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "openresp/error.hpp"
#include "openresp/io.hpp"
#include "openresp/topics/model.hpp"
#include "openresp/topics/sweep.hpp"

namespace openresp::topics {

// On-disk topic model for one question set.
struct TopicModelFile {
  std::string dataset;       // "manual" or "automatic"
  std::string question_set;  // e.g. "democracy"
  TopicModel model;
  CoherenceSweep sweep;
  std::vector<std::string> speech_ids;    // speech-input answers in this set
  std::vector<std::string> unembeddable;  // answers left out before clustering
  nlohmann::ordered_json config;          // echo of the settings that produced the model
};

inline nlohmann::ordered_json to_json(const TopicModelFile& f, std::size_t max_terms = 100) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dataset"] = f.dataset;
  j["question_set"] = f.question_set;
  j["min_cluster_size"] = f.model.min_cluster_size;
  j["coherence_umass"] = f.model.coherence_umass ? ordered_json(*f.model.coherence_umass) : ordered_json(nullptr);
  j["m_total_answers"] = f.model.m_total_answers;
  j["m_includes_outliers"] = true;
  j["tfidf_variant"] = std::string(to_string(f.model.variant));
  ordered_json topics = ordered_json::array();
  for (const auto& t : f.model.topics) {
    ordered_json tj;
    tj["topic_id"] = t.topic_id;
    tj["n_members"] = t.member_ids.size();
    ordered_json terms = ordered_json::array();
    for (std::size_t k = 0; k < t.terms.size() && k < max_terms; ++k)
      terms.push_back(ordered_json{{"term", t.terms[k].term}, {"score", t.terms[k].score}});
    tj["terms"] = terms;
    tj["member_ids"] = t.member_ids;
    topics.push_back(tj);
  }
  j["topics"] = topics;
  j["outlier_ids"] = f.model.outlier_ids;
  j["speech_ids"] = f.speech_ids;
  j["unembeddable_ids"] = f.unembeddable;
  ordered_json ev = ordered_json::array();
  for (const auto& c : f.sweep.evaluated) {
    ev.push_back(ordered_json{{"min_cluster_size", c.min_cluster_size},
                              {"min_samples", c.min_samples},
                              {"n_topics", c.n_topics},
                              {"n_outliers", c.n_outliers},
                              {"coherence", c.coherence ? ordered_json(*c.coherence) : ordered_json(nullptr)},
                              {"skipped_pairs", c.skipped_pairs}});
  }
  j["sweep"] = ordered_json{{"selected", f.sweep.selected ? ordered_json(*f.sweep.selected) : ordered_json(nullptr)},
                            {"evaluated", ev}};
  j["config"] = f.config;
  return j;
}

inline TopicModelFile topic_model_from_json(const nlohmann::json& j, const std::string& source = "<model>") {
  try {
    TopicModelFile f;
    f.dataset = j.at("dataset").get<std::string>();
    f.question_set = j.at("question_set").get<std::string>();
    f.model.min_cluster_size = j.at("min_cluster_size").get<std::size_t>();
    if (!j.at("coherence_umass").is_null()) f.model.coherence_umass = j.at("coherence_umass").get<double>();
    f.model.m_total_answers = j.at("m_total_answers").get<std::size_t>();
    f.model.variant = parse_tfidf_variant(j.at("tfidf_variant").get<std::string>());
    for (const auto& tj : j.at("topics")) {
      Topic t;
      t.topic_id = tj.at("topic_id").get<int>();
      for (const auto& term : tj.at("terms"))
        t.terms.push_back({term.at("term").get<std::string>(), term.at("score").get<double>()});
      t.member_ids = tj.at("member_ids").get<std::vector<std::string>>();
      f.model.topics.push_back(std::move(t));
    }
    f.model.outlier_ids = j.at("outlier_ids").get<std::vector<std::string>>();
    f.speech_ids = j.at("speech_ids").get<std::vector<std::string>>();
    f.unembeddable = j.value("unembeddable_ids", std::vector<std::string>{});
    const auto& sw = j.at("sweep");
    if (!sw.at("selected").is_null()) f.sweep.selected = sw.at("selected").get<std::size_t>();
    for (const auto& c : sw.at("evaluated")) {
      SweepCandidate sc;
      sc.min_cluster_size = c.at("min_cluster_size").get<std::size_t>();
      sc.min_samples = c.at("min_samples").get<std::size_t>();
      sc.n_topics = c.at("n_topics").get<std::size_t>();
      sc.n_outliers = c.at("n_outliers").get<std::size_t>();
      if (!c.at("coherence").is_null()) sc.coherence = c.at("coherence").get<double>();
      sc.skipped_pairs = c.at("skipped_pairs").get<std::size_t>();
      f.sweep.evaluated.push_back(sc);
    }
    if (j.contains("config")) f.config = j.at("config");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": malformed topic model: " + e.what());
  }
}

inline void store_topic_model(const std::filesystem::path& path, const TopicModelFile& f) {
  write_file(path, to_json(f).dump(2) + "\n");
}

inline TopicModelFile load_topic_model(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return topic_model_from_json(j, path.string());
}

}  // namespace openresp::topics
