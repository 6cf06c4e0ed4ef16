#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "openresp/error.hpp"

namespace openresp::corpus {

enum class Modality { speech, keyboard };
enum class TranscriptSource { automatic, manual, typed };

inline std::string_view to_string(Modality m) noexcept {
  return m == Modality::speech ? "speech" : "keyboard";
}

inline std::string_view to_string(TranscriptSource s) noexcept {
  switch (s) {
    case TranscriptSource::automatic: return "automatic";
    case TranscriptSource::manual: return "manual";
    case TranscriptSource::typed: return "typed";
  }
  return "typed";
}

inline std::optional<Modality> parse_modality(std::string_view s) noexcept {
  if (s == "speech") return Modality::speech;
  if (s == "keyboard") return Modality::keyboard;
  return std::nullopt;
}

inline std::optional<TranscriptSource> parse_source(std::string_view s) noexcept {
  if (s == "automatic") return TranscriptSource::automatic;
  if (s == "manual") return TranscriptSource::manual;
  if (s == "typed") return TranscriptSource::typed;
  return std::nullopt;
}

struct Response {
  std::string id;
  std::string question_id;
  Modality modality = Modality::keyboard;
  TranscriptSource transcript_source = TranscriptSource::typed;
  std::string raw_text;

  friend bool operator==(const Response&, const Response&) = default;
};

// keyboard <=> typed; speech <=> automatic|manual.
inline bool consistent(Modality m, TranscriptSource s) noexcept {
  return m == Modality::keyboard ? s == TranscriptSource::typed : s != TranscriptSource::typed;
}

}  // namespace openresp::corpus
