#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "openresp/corpus/csv.hpp"
#include "openresp/error.hpp"
#include "openresp/io.hpp"

namespace openresp::agreement {

using Label = std::string;
using ItemLabels = std::map<std::string, Label, std::less<>>;  // item id -> label

// Long-format ratings: one (item, rater, label) triple per row.
struct RatingTable {
  std::vector<std::string> items;   // first-seen order
  std::vector<std::string> raters;  // first-seen order
  std::map<std::string, ItemLabels, std::less<>> by_rater;
  std::map<std::string, std::string, std::less<>> question_of;  // filled when a question_id column exists

  const ItemLabels& of(std::string_view rater) const {
    auto it = by_rater.find(rater);
    if (it == by_rater.end()) throw DataError("unknown rater '" + std::string(rater) + "'");
    return it->second;
  }
};

// Columns item_id, rater_id, label (any order), optionally question_id.
// Labels must belong to `label_set`; a rater may rate an item only once.
inline RatingTable parse_ratings_csv(std::string_view text, const std::vector<Label>& label_set,
                                     const std::string& source = "<ratings>") {
  auto records = corpus::parse_csv(text, source);
  if (records.empty()) throw ParseError(source, 1, "missing header");
  const auto& header = records.front().fields;
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto item_col = column("item_id"), rater_col = column("rater_id"), label_col = column("label");
  auto question_col = column("question_id");
  if (!item_col || !rater_col || !label_col)
    throw ParseError(source, 1, "ratings header must contain item_id, rater_id, label");

  RatingTable t;
  std::set<std::string, std::less<>> seen_items;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    const auto line = records[r].line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != header.size()) throw ParseError(source, line, "wrong number of fields");
    const std::string& item = f[*item_col];
    const std::string& rater = f[*rater_col];
    const std::string& label = f[*label_col];
    if (std::find(label_set.begin(), label_set.end(), label) == label_set.end())
      throw ParseError(source, line, "label '" + label + "' is not in the declared label set");
    if (seen_items.insert(item).second) t.items.push_back(item);
    auto [it, fresh] = t.by_rater.try_emplace(rater);
    if (fresh) t.raters.push_back(rater);
    if (!it->second.emplace(item, label).second)
      throw ParseError(source, line, "rater '" + rater + "' rated item '" + item + "' twice");
    if (question_col) {
      auto [q, inserted] = t.question_of.emplace(item, f[*question_col]);
      if (!inserted && q->second != f[*question_col])
        throw ParseError(source, line, "item '" + item + "' listed under two questions");
    }
  }
  return t;
}

inline RatingTable load_ratings(const std::filesystem::path& path, const std::vector<Label>& label_set) {
  return parse_ratings_csv(read_file(path), label_set, path.string());
}

// Item x label count matrix for a fixed panel of raters.
struct RatingMatrix {
  std::vector<std::string> items;
  std::vector<Label> labels;
  std::vector<std::vector<std::size_t>> counts;  // [item][label]
  std::size_t n_raters = 0;

  void validate() const {
    if (n_raters < 2) throw DataError("a rating matrix needs at least two raters");
    if (counts.size() != items.size()) throw DataError("rating matrix row count mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i].size() != labels.size()) throw DataError("rating matrix column count mismatch");
      std::size_t s = 0;
      for (auto c : counts[i]) s += c;
      if (s != n_raters)
        throw DataError("item '" + items[i] + "' has " + std::to_string(s) + " ratings, expected " +
                        std::to_string(n_raters));
    }
  }
};

// Every listed rater must cover every listed item.
inline RatingMatrix build_matrix(const RatingTable& table, const std::vector<std::string>& raters,
                                 const std::vector<std::string>& items, const std::vector<Label>& labels) {
  RatingMatrix m;
  m.items = items;
  m.labels = labels;
  m.n_raters = raters.size();
  m.counts.assign(items.size(), std::vector<std::size_t>(labels.size(), 0));
  for (const auto& rater : raters) {
    const auto& lab = table.of(rater);
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto it = lab.find(items[i]);
      if (it == lab.end()) throw DataError("rater '" + rater + "' has no rating for item '" + items[i] + "'");
      auto j = std::find(labels.begin(), labels.end(), it->second);
      if (j == labels.end()) throw DataError("label '" + it->second + "' not in label set");
      ++m.counts[i][static_cast<std::size_t>(j - labels.begin())];
    }
  }
  m.validate();
  return m;
}

}  // namespace openresp::agreement
