#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "openresp/agreement/ratings.hpp"
#include "openresp/error.hpp"

namespace openresp::agreement {

struct MajorityGold {
  ItemLabels gold;
  std::vector<std::string> ties;  // items without a strict plurality; left out of gold
};

inline MajorityGold majority_gold(const RatingMatrix& m) {
  m.validate();
  MajorityGold out;
  for (std::size_t i = 0; i < m.items.size(); ++i) {
    const auto& row = m.counts[i];
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[best]) {
        best = j;
        tie = false;
      } else if (row[j] == row[best]) {
        tie = true;
      }
    }
    if (tie)
      out.ties.push_back(m.items[i]);
    else
      out.gold.emplace(m.items[i], m.labels[best]);
  }
  return out;
}

struct Prf {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::size_t tp = 0, fp = 0, fn = 0;
};

namespace detail {

inline void check_same_items(const ItemLabels& gold, const ItemLabels& predicted) {
  if (gold.size() != predicted.size()) throw DataError("gold and predicted label sets cover different items");
  for (auto g = gold.begin(), p = predicted.begin(); g != gold.end(); ++g, ++p)
    if (g->first != p->first) throw DataError("item '" + g->first + "' missing from predictions");
}

}  // namespace detail

// One-vs-rest precision/recall/F1; undefined ratios are nullopt.
inline Prf prf(const ItemLabels& gold, const ItemLabels& predicted, const Label& label) {
  detail::check_same_items(gold, predicted);
  Prf r;
  for (auto g = gold.begin(), p = predicted.begin(); g != gold.end(); ++g, ++p) {
    const bool in_gold = g->second == label, in_pred = p->second == label;
    r.tp += in_gold && in_pred;
    r.fp += !in_gold && in_pred;
    r.fn += in_gold && !in_pred;
  }
  if (r.tp + r.fp > 0) r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  if (r.tp + r.fn > 0) r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  if (r.precision && r.recall) {
    const double s = *r.precision + *r.recall;
    r.f1 = s == 0.0 ? 0.0 : 2.0 * *r.precision * *r.recall / s;
  }
  return r;
}

// confusion[gold][predicted]
using Confusion = std::map<Label, std::map<Label, std::size_t>>;

inline Confusion confusion(const ItemLabels& gold, const ItemLabels& predicted) {
  detail::check_same_items(gold, predicted);
  Confusion c;
  for (auto g = gold.begin(), p = predicted.begin(); g != gold.end(); ++g, ++p) ++c[g->second][p->second];
  return c;
}

// Restricts a rater's labels to the items of `gold`.
inline ItemLabels restrict_to(const ItemLabels& labels, const ItemLabels& gold) {
  ItemLabels out;
  for (const auto& [item, _] : gold) {
    auto it = labels.find(item);
    if (it == labels.end()) throw DataError("no prediction for item '" + item + "'");
    out.emplace(item, it->second);
  }
  return out;
}

}  // namespace openresp::agreement
