#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "openresp/agreement/filters.hpp"
#include "openresp/agreement/fleiss.hpp"
#include "openresp/agreement/gold.hpp"
#include "openresp/agreement/ratings.hpp"

using namespace openresp;
using namespace openresp::agreement;

namespace {

RatingMatrix matrix_from(std::vector<std::vector<std::size_t>> counts, std::vector<Label> labels) {
  RatingMatrix m;
  m.labels = std::move(labels);
  for (std::size_t i = 0; i < counts.size(); ++i) m.items.push_back("i" + std::to_string(i));
  m.n_raters = 0;
  for (auto c : counts.front()) m.n_raters += c;
  m.counts = std::move(counts);
  return m;
}

// Direct textbook evaluation, kept separate from the library path.
double kappa_oracle(const std::vector<std::vector<std::size_t>>& counts) {
  const double N = static_cast<double>(counts.size());
  double n = 0;
  for (auto c : counts[0]) n += static_cast<double>(c);
  const std::size_t k = counts[0].size();
  double pbar = 0;
  for (const auto& row : counts) {
    double agree = 0;
    for (auto c : row) agree += static_cast<double>(c) * (static_cast<double>(c) - 1);
    pbar += agree / (n * (n - 1));
  }
  pbar /= N;
  double pe = 0;
  for (std::size_t j = 0; j < k; ++j) {
    double col = 0;
    for (const auto& row : counts) col += static_cast<double>(row[j]);
    pe += (col / (N * n)) * (col / (N * n));
  }
  return (pbar - pe) / (1 - pe);
}

double item_agreement(const std::vector<std::size_t>& row, double n) {
  double s = 0;
  for (auto c : row) s += static_cast<double>(c) * static_cast<double>(c);
  return (s - n) / (n * (n - 1));
}

std::vector<std::vector<std::size_t>> random_counts(std::mt19937_64& rng, std::size_t items, std::size_t raters,
                                                    std::size_t labels) {
  std::uniform_int_distribution<std::size_t> pick(0, labels - 1);
  std::vector<std::vector<std::size_t>> c(items, std::vector<std::size_t>(labels, 0));
  for (auto& row : c)
    for (std::size_t r = 0; r < raters; ++r) ++row[pick(rng)];
  return c;
}

}  // namespace

TEST_CASE("Fleiss kappa hand-derived fixture", "[agreement][fleiss]") {
  auto m = matrix_from({{3, 0}, {3, 0}, {0, 3}, {2, 1}}, {"pos", "neg"});
  CHECK(std::abs(fleiss_kappa(m) - 0.625) <= 1e-9);
  CHECK(perfect_agreement_count(m) == 3);
}

TEST_CASE("Fleiss kappa unanimous ratings", "[agreement][fleiss]") {
  CHECK(fleiss_kappa(matrix_from({{3, 0}, {0, 3}, {3, 0}}, {"pos", "neg"})) == 1.0);
  // Pe == 1 limit: everyone always picks the same label.
  CHECK(fleiss_kappa(matrix_from({{4, 0, 0}, {4, 0, 0}}, {"pos", "neg", "neu"})) == 1.0);
}

TEST_CASE("Fleiss kappa errors", "[agreement][fleiss]") {
  CHECK_THROWS_AS(fleiss_kappa(matrix_from({{2, 1}}, {"a", "b"})), ComputationError);
  auto bad = matrix_from({{2, 1}, {1, 1}}, {"a", "b"});
  CHECK_THROWS_AS(fleiss_kappa(bad), DataError);
  auto one_rater = matrix_from({{1, 0}, {0, 1}}, {"a", "b"});
  CHECK_THROWS_AS(fleiss_kappa(one_rater), DataError);
}

TEST_CASE("Fleiss kappa permutation invariance", "[agreement][fleiss][property]") {
  std::mt19937_64 rng(5);
  auto counts = random_counts(rng, 30, 4, 3);
  const double base = fleiss_kappa(matrix_from(counts, {"a", "b", "c"}));
  CHECK(base == Catch::Approx(kappa_oracle(counts)).epsilon(1e-12));
  for (int s = 0; s < 100; ++s) {
    auto shuffled = counts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::size_t> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& row : shuffled) row = {row[perm[0]], row[perm[1]], row[perm[2]]};
    CHECK(std::abs(fleiss_kappa(matrix_from(shuffled, {"x", "y", "z"})) - base) <= 1e-12);
  }
}

TEST_CASE("duplicating an item pulls mean agreement toward it", "[agreement][fleiss][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto counts = random_counts(rng, 3 + trial % 10, 3, 3);
    const std::size_t dup = static_cast<std::size_t>(trial) % counts.size();
    auto more = counts;
    more.push_back(counts[dup]);
    const double n = 3.0;
    auto mean_agreement = [&](const auto& c) {
      double s = 0;
      for (const auto& row : c) s += item_agreement(row, n);
      return s / static_cast<double>(c.size());
    };
    const double p_dup = item_agreement(counts[dup], n);
    CHECK(std::abs(mean_agreement(more) - p_dup) <= std::abs(mean_agreement(counts) - p_dup) + 1e-15);
    const auto m = matrix_from(more, {"a", "b", "c"});
    bool unanimous = true;
    for (const auto& row : more)
      for (auto c : row) unanimous = unanimous && (c == 0 || c == 3);
    if (unanimous) continue;
    CHECK(fleiss_kappa(m) == Catch::Approx(kappa_oracle(more)).epsilon(1e-12));
  }
}

TEST_CASE("neutral filter", "[agreement][filters]") {
  ItemLabels r1{{"a", "pos"}, {"b", "pos"}, {"c", "neutral"}};
  ItemLabels r2{{"a", "pos"}, {"b", "neg"}, {"c", "neutral"}};
  ItemLabels r3{{"a", "neutral"}, {"b", "pos"}, {"c", "neutral"}};
  auto split = neutral_filter({&r1, &r2, &r3}, {"a", "b", "c"});
  CHECK(split.kept == std::vector<std::string>{"b"});
  CHECK(split.dropped == std::vector<std::string>{"a", "c"});

  auto all = neutral_filter({&r1, &r2, &r3}, {"c"});
  CHECK(all.kept.empty());
  RatingTable t;
  t.by_rater = {{"h1", r1}, {"h2", r2}};
  CHECK_THROWS_AS(fleiss_kappa(build_matrix(t, {"h1", "h2"}, all.kept, {"pos", "neg", "neutral"})),
                  ComputationError);

  CHECK_THROWS_AS(neutral_filter({&r1}, {"zz"}), DataError);
}

TEST_CASE("question exclusion by neutral share", "[agreement][filters]") {
  GroupedRatings g;
  // Q13: 73 of 100 answers majority-neutral.
  for (int i = 0; i < 100; ++i)
    g["Q13"].push_back(i < 73 ? std::vector<Label>{"neutral", "neutral", "pos"}
                              : std::vector<Label>{"pos", "pos", "neutral"});
  g["Q15"].assign(10, {"pos", "neg", "pos"});
  for (int i = 0; i < 10; ++i) g["Q20"].push_back(i < 5 ? std::vector<Label>{"neutral", "neutral", "neutral"}
                                                        : std::vector<Label>{"pos", "pos", "pos"});
  const auto stats = question_neutral_exclusion(g, 50.0);
  REQUIRE(stats.size() == 3);
  CHECK(stats[0].question_id == "Q13");
  CHECK(stats[0].neutral_pct == 73.0);
  CHECK(stats[0].excluded);
  CHECK_FALSE(stats[1].excluded);
  CHECK(stats[1].neutral_pct == 0.0);
  CHECK(stats[2].neutral_pct == 50.0);
  CHECK_FALSE(stats[2].excluded);
  CHECK(excluded_questions(stats) == std::vector<std::string>{"Q13"});

  // "any" rule: every Q13 answer has a neutral vote.
  const auto any = question_neutral_exclusion(g, 50.0, NeutralityRule::any);
  CHECK(any[0].neutral_pct == 100.0);
}

TEST_CASE("majority gold", "[agreement][gold]") {
  auto m = matrix_from({{2, 1, 0}, {1, 1, 1}, {0, 0, 3}}, {"pos", "neg", "neutral"});
  const auto g = majority_gold(m);
  CHECK(g.gold.at("i0") == "pos");
  CHECK(g.ties == std::vector<std::string>{"i1"});
  CHECK(g.gold.at("i2") == "neutral");
}

TEST_CASE("three raters over two labels always yield a majority", "[agreement][gold][property]") {
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<std::size_t> row{0, 0};
    for (int r = 0; r < 3; ++r) ++row[(mask >> r) & 1];
    auto m = matrix_from({row, {3, 0}}, {"pos", "neg"});
    CHECK(majority_gold(m).ties.empty());
  }
}

TEST_CASE("precision recall F1", "[agreement][prf]") {
  ItemLabels gold{{"a", "neg"}, {"b", "neg"}, {"c", "pos"}};
  ItemLabels pred{{"a", "neg"}, {"b", "pos"}, {"c", "pos"}};
  auto neg = prf(gold, pred, "neg");
  CHECK(*neg.precision == 1.0);
  CHECK(*neg.recall == 0.5);
  CHECK(*neg.f1 == Catch::Approx(2.0 / 3.0).epsilon(1e-15));

  auto perfect = prf(gold, gold, "pos");
  CHECK(*perfect.precision == 1.0);
  CHECK(*perfect.recall == 1.0);
  CHECK(*perfect.f1 == 1.0);

  ItemLabels all_neg{{"a", "neg"}, {"b", "neg"}, {"c", "neg"}};
  auto undefined = prf(gold, all_neg, "pos");
  CHECK_FALSE(undefined.precision.has_value());
  CHECK(*undefined.recall == 0.0);
  CHECK_FALSE(undefined.f1.has_value());

  ItemLabels other{{"a", "neg"}, {"x", "pos"}, {"c", "pos"}};
  CHECK_THROWS_AS(prf(gold, other, "neg"), DataError);

  const auto c = confusion(gold, pred);
  CHECK(c.at("neg").at("pos") == 1);
  CHECK(c.at("neg").at("neg") == 1);
}

TEST_CASE("micro-averaged recall equals accuracy", "[agreement][prf][property]") {
  std::mt19937_64 rng(21);
  const std::vector<Label> labels{"pos", "neg", "neutral"};
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    ItemLabels gold, pred;
    std::size_t correct = 0;
    const int n = 5 + trial;
    for (int i = 0; i < n; ++i) {
      const auto id = "i" + std::to_string(i);
      gold[id] = labels[pick(rng)];
      pred[id] = labels[pick(rng)];
      correct += gold[id] == pred[id];
    }
    std::size_t tp = 0, fn = 0;
    for (const auto& l : labels) {
      const auto r = prf(gold, pred, l);
      tp += r.tp;
      fn += r.fn;
    }
    CHECK(static_cast<double>(tp) / static_cast<double>(tp + fn) ==
          Catch::Approx(static_cast<double>(correct) / n).epsilon(1e-15));
  }
}

TEST_CASE("adding a disagreeing machine rater lowers kappa", "[agreement][fleiss][property]") {
  const std::vector<Label> labels{"pos", "neg"};
  // Constructed fixtures: 3 human raters plus one machine that disagrees at
  // least once with the human majority.
  struct Fixture {
    std::vector<std::vector<Label>> humans;  // per item
    std::vector<Label> machine;
  };
  std::vector<Fixture> fixtures{
      {{{"pos", "pos", "pos"}, {"neg", "neg", "neg"}, {"pos", "pos", "pos"}, {"neg", "neg", "neg"}},
       {"pos", "pos", "pos", "neg"}},
      {{{"pos", "pos", "neg"}, {"neg", "neg", "neg"}, {"pos", "pos", "pos"}, {"neg", "neg", "neg"}, {"pos", "pos", "pos"}},
       {"pos", "neg", "neg", "neg", "pos"}},
      {{{"pos", "pos", "pos"}, {"pos", "pos", "pos"}, {"neg", "neg", "neg"}, {"neg", "neg", "pos"}},
       {"neg", "neg", "neg", "neg"}},
  };
  for (const auto& f : fixtures) {
    RatingTable t;
    std::vector<std::string> items;
    for (std::size_t i = 0; i < f.humans.size(); ++i) {
      const auto id = "i" + std::to_string(i);
      items.push_back(id);
      for (std::size_t r = 0; r < 3; ++r) t.by_rater["h" + std::to_string(r)][id] = f.humans[i][r];
      t.by_rater["m"][id] = f.machine[i];
    }
    const double humans = fleiss_kappa(build_matrix(t, {"h0", "h1", "h2"}, items, labels));
    const double joint = fleiss_kappa(build_matrix(t, {"h0", "h1", "h2", "m"}, items, labels));
    CHECK(joint <= humans);
  }
}

TEST_CASE("ratings CSV parsing", "[agreement][ratings]") {
  const std::vector<Label> labels{"positive", "negative", "neutral"};
  auto t = parse_ratings_csv("item_id,rater_id,label\na,h1,positive\na,h2,negative\nb,h1,neutral\n", labels);
  CHECK(t.items == std::vector<std::string>{"a", "b"});
  CHECK(t.raters == std::vector<std::string>{"h1", "h2"});
  CHECK(t.of("h1").at("b") == "neutral");
  CHECK_THROWS_AS(build_matrix(t, {"h1", "h2"}, {"a", "b"}, labels), DataError);  // h2 misses b

  CHECK_THROWS_WITH(parse_ratings_csv("item_id,rater_id,label\na,h1,happy\n", labels),
                    Catch::Matchers::ContainsSubstring("happy"));
  CHECK_THROWS_AS(parse_ratings_csv("item_id,rater_id,label\na,h1,positive\na,h1,negative\n", labels), ParseError);
  CHECK_THROWS_AS(parse_ratings_csv("item,rater,label\n", labels), ParseError);

  auto q = parse_ratings_csv("item_id,rater_id,label,question_id\na,h1,positive,Q15\n", labels);
  CHECK(q.question_of.at("a") == "Q15");
}
