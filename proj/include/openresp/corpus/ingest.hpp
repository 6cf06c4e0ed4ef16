#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "openresp/corpus/csv.hpp"
#include "openresp/corpus/response.hpp"
#include "openresp/io.hpp"

namespace openresp::corpus {

enum class Format { jsonl, csv };

namespace detail {

inline Response make_response(const std::string& source, std::size_t line, std::string id,
                              std::string question_id, std::string_view modality,
                              std::string_view transcript_source, std::string text) {
  auto m = parse_modality(modality);
  if (!m) throw ParseError(source, line, "unknown modality '" + std::string(modality) + "'");
  auto s = parse_source(transcript_source);
  if (!s) throw ParseError(source, line, "unknown transcript_source '" + std::string(transcript_source) + "'");
  if (!consistent(*m, *s))
    throw ParseError(source, line,
                     "transcript_source '" + std::string(transcript_source) + "' not allowed for modality '" +
                         std::string(modality) + "'");
  if (id.empty()) throw ParseError(source, line, "empty id");
  return Response{std::move(id), std::move(question_id), *m, *s, std::move(text)};
}

inline std::string json_string(const nlohmann::json& obj, const char* key, const std::string& source,
                               std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw ParseError(source, line, std::string("missing or non-string key '") + key + "'");
  return it->get<std::string>();
}

}  // namespace detail

inline std::vector<Response> parse_jsonl(std::string_view text, const std::string& source = "<jsonl>") {
  std::vector<Response> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(source, line_no, "expected a JSON object");
    out.push_back(detail::make_response(
        source, line_no, detail::json_string(obj, "id", source, line_no),
        detail::json_string(obj, "question_id", source, line_no),
        detail::json_string(obj, "modality", source, line_no),
        detail::json_string(obj, "transcript_source", source, line_no),
        detail::json_string(obj, "text", source, line_no)));
  }
  return out;
}

inline std::vector<Response> parse_responses_csv(std::string_view text, const std::string& source = "<csv>") {
  auto records = parse_csv(text, source);
  if (records.empty()) throw ParseError(source, 1, "missing header");
  static constexpr std::array<std::string_view, 5> kColumns{"id", "question_id", "modality",
                                                           "transcript_source", "text"};
  std::array<std::size_t, 5> col{};
  const auto& header = records.front().fields;
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    auto it = std::find(header.begin(), header.end(), kColumns[k]);
    if (it == header.end()) throw ParseError(source, 1, "missing column '" + std::string(kColumns[k]) + "'");
    col[k] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<Response> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& f = records[r].fields;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != header.size())
      throw ParseError(source, records[r].line,
                       "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    out.push_back(detail::make_response(source, records[r].line, f[col[0]], f[col[1]], f[col[2]], f[col[3]],
                                        f[col[4]]));
  }
  return out;
}

// Rejects duplicate (id, transcript_source) keys.
inline void check_unique(const std::vector<Response>& responses) {
  std::set<std::pair<std::string, TranscriptSource>> seen;
  for (const auto& r : responses) {
    if (!seen.emplace(r.id, r.transcript_source).second)
      throw DataError("duplicate response id '" + r.id + "' for transcript_source '" +
                      std::string(to_string(r.transcript_source)) + "'");
  }
}

inline std::vector<Response> ingest(const std::filesystem::path& path, Format format) {
  const std::string text = read_file(path);
  auto out = format == Format::jsonl ? parse_jsonl(text, path.string()) : parse_responses_csv(text, path.string());
  check_unique(out);
  return out;
}

inline Format format_from_extension(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? Format::csv : Format::jsonl;
}

inline std::string to_jsonl(const std::vector<Response>& responses) {
  std::string out;
  for (const auto& r : responses) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["question_id"] = r.question_id;
    obj["modality"] = to_string(r.modality);
    obj["transcript_source"] = to_string(r.transcript_source);
    obj["text"] = r.raw_text;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

}  // namespace openresp::corpus
