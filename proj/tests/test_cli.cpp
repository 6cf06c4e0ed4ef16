#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "openresp/cli/commands.hpp"
#include "openresp/cli/config.hpp"
#include "support/cli_run.hpp"
#include "support/planted.hpp"
#include "support/temp_dir.hpp"

using namespace openresp;
using openresp::testing::TempDir;

namespace {

const std::filesystem::path kData = OPENRESP_TEST_DATA;
const std::filesystem::path kCli = kData / "cli";
const std::filesystem::path kGolden = OPENRESP_GOLDEN;
const std::filesystem::path kRepoData = OPENRESP_REPO_DATA;

cli::Context context(const std::filesystem::path& config, const TempDir& tmp, std::ostream* log) {
  cli::Context ctx;
  ctx.config = cli::load_config(config);
  ctx.config.output_dir = tmp / "out";
  ctx.log = log;
  return ctx;
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("default config", "[cli][config]") {
  const auto c = cli::parse_config("{}");
  REQUIRE(c.question_sets.size() == 4);
  CHECK(c.question_sets[0].name == "democracy");
  CHECK(c.question_sets[1].name == "europe");
  CHECK(c.question_sets[2].name == "trust");
  CHECK(c.question_sets[3].name == "marriage");
  CHECK(c.question_sets[3].questions.size() == 12);
  CHECK(c.rho_threshold == 0.7);
  CHECK(c.p_threshold == 0.05);
  CHECK(c.neutral_pct == 50.0);
  CHECK(c.sweep_min == 2);
  CHECK(c.sweep_max == 50);
  CHECK(c.sentiment_questions.size() == 10);
}

TEST_CASE("shipped question pair file matches the built-in table", "[cli][config]") {
  const auto p = kRepoData / "question_pairs.tsv";
  CHECK(cli::parse_question_pairs(read_file(p), p.string()) == cli::default_question_pairs());
}

TEST_CASE("config validation", "[cli][config]") {
  CHECK_THROWS_AS(cli::parse_config(R"({"sweep": {"min": 1}})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"sweep": {"min": 2, "max": 10001}})"), ConfigError);
  CHECK_NOTHROW(cli::parse_config(R"({"sweep": {"min": 2, "max": 10000}})"));
  CHECK_THROWS_AS(cli::parse_config(R"({"sweep": {"min": 9, "max": 3}})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"question_sets": {"x": ["13"]}})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"question_sets": {"x": ["Q1a"]}})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"noise": {"del_rate": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"embedder": "bert"})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"dim": "wide"})"), ConfigError);
  CHECK_THROWS_AS(cli::parse_config("{"), ConfigError);
  CHECK_THROWS_AS(cli::load_config(kCli / "no_such.json"), ConfigError);
}

TEST_CASE("question sets keep file order", "[cli][config]") {
  const auto c = cli::parse_config(R"({"question_sets": {"zeta": ["Q2"], "alpha": ["Q1"]}})");
  REQUIRE(c.question_sets.size() == 2);
  CHECK(c.question_sets[0].name == "zeta");
  CHECK(c.question_sets[1].name == "alpha");
}

TEST_CASE("relative paths resolve against the config directory", "[cli][config]") {
  const auto c = cli::load_config(kCli / "small.json");
  REQUIRE(c.paths.responses);
  CHECK(*c.paths.responses == kCli / "small.jsonl");
}

TEST_CASE("stats command", "[cli][stats]") {
  TempDir tmp;
  std::ostringstream log;
  auto ctx = context(kCli / "small.json", tmp, &log);
  REQUIRE(cli::cmd_stats(ctx) == 0);

  // Oracle: library statistics over the manual/typed texts.
  const auto stop = corpus::load_stopwords(kRepoData / "stopwords_nl.txt");
  std::vector<corpus::TokenizedAnswer> answers;
  std::map<std::string, corpus::Modality, std::less<>> modality;
  for (const auto& r : corpus::ingest(kCli / "small.jsonl", corpus::Format::jsonl)) {
    if (r.transcript_source == corpus::TranscriptSource::automatic) continue;
    answers.push_back(corpus::tokenize(corpus::normalize(r.raw_text), stop, r.id));
    modality[r.id] = r.modality;
  }
  const auto expected = corpus::corpus_stats(answers, modality);
  REQUIRE(expected.speech.median_words > expected.keyboard.median_words);

  const auto j = read_json(tmp / "out/stats/stats.json");
  CHECK(j["stats"]["speech"]["median_words"] == *expected.speech.median_words);
  CHECK(j["stats"]["keyboard"]["median_words"] == *expected.keyboard.median_words);
  const auto md = read_file(tmp / "out/stats/table1.md");
  CHECK(md.find("| median # words | 3 | 2.5 |") != std::string::npos);
}

TEST_CASE("missing stopword file is a config error before any output", "[cli][stats]") {
  TempDir tmp;
  write_file(tmp / "c.json", R"({"paths": {"responses": ")" + (kCli / "small.jsonl").string() +
                                 R"(", "stopwords": "nowhere.txt"}})");
  const auto r = testing::run_cli("--config " + q(tmp / "c.json") + " --out " + q(tmp / "out") + " stats", tmp.path());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("stopwords") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(tmp / "out"));
}

TEST_CASE("wer command pools the two-utterance fixture to 50.00", "[cli][wer]") {
  TempDir tmp;
  std::ostringstream log;
  auto ctx = context(kCli / "small.json", tmp, &log);
  REQUIRE(cli::cmd_wer(ctx) == 0);
  const auto j = read_json(tmp / "out/wer/wer.json");
  CHECK(report::fixed(j["report"]["wer"].get<double>()) == "50.00");
  CHECK(j["unmatched_manual"] == nlohmann::json::array({"r05"}));
  CHECK(log.str().find("'r05'") != std::string::npos);
  CHECK(read_file(tmp / "out/wer/table3.md").find("| ASR | 50.00 |") != std::string::npos);
}

TEST_CASE("wer command with empty hypotheses", "[cli][wer]") {
  TempDir tmp;
  write_file(tmp / "r.jsonl",
             R"({"id":"a","question_id":"Q13","modality":"speech","transcript_source":"manual","text":"een twee drie"}
{"id":"a","question_id":"Q13","modality":"speech","transcript_source":"automatic","text":""}
{"id":"b","question_id":"Q13","modality":"speech","transcript_source":"manual","text":"vier"}
{"id":"b","question_id":"Q13","modality":"speech","transcript_source":"automatic","text":"..."}
)");
  write_file(tmp / "c.json", R"({"paths": {"responses": "r.jsonl"}})");
  std::ostringstream log;
  auto ctx = context(tmp / "c.json", tmp, &log);
  REQUIRE(cli::cmd_wer(ctx) == 0);
  const auto j = read_json(tmp / "out/wer/wer.json");
  CHECK(j["report"]["wer"] == 100.0);
  CHECK(j["report"]["totals"]["insertions"] == 0);
  CHECK(j["report"]["totals"]["deletions"] == 4);
  CHECK(j["report"]["totals"]["n_ref"] == 4);
}

TEST_CASE("wer command without pairs", "[cli][wer]") {
  TempDir tmp;
  write_file(tmp / "r.jsonl",
             R"({"id":"a","question_id":"Q16","modality":"keyboard","transcript_source":"typed","text":"ja"}
)");
  write_file(tmp / "c.json", R"({"paths": {"responses": "r.jsonl"}})");
  const auto r = testing::run_cli("--config " + q(tmp / "c.json") + " --out " + q(tmp / "out") + " wer", tmp.path());
  CHECK(r.exit_code == 2);
}

TEST_CASE("sentiment-eval reproduces the hand-built kappa", "[cli][sentiment]") {
  TempDir tmp;
  std::ostringstream log;
  auto ctx = context(kCli / "small.json", tmp, &log);
  REQUIRE(cli::cmd_sentiment_eval(ctx) == 0);
  const auto j = read_json(tmp / "out/sentiment-eval/sentiment.json");
  CHECK(std::abs(j["evaluation"]["kappa_humans"].get<double>() - 0.625) < 1e-9);
  CHECK(j["evaluation"]["questions"].size() == 2);
  CHECK(j["evaluation"]["questions"][0]["question"] == "Q13/Q16");
  CHECK(j["evaluation"]["prf"]["positive"]["f1"].get<double>() == Catch::Approx(0.8));
}

TEST_CASE("sentiment-eval with only neutral ratings", "[cli][sentiment]") {
  TempDir tmp;
  write_file(tmp / "c.json", R"({"paths": {"ratings": ")" + (kCli / "ratings_neutral.csv").string() + R"("}})");
  const auto r =
      testing::run_cli("--config " + q(tmp / "c.json") + " --out " + q(tmp / "out") + " sentiment-eval", tmp.path());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("no non-neutral items") != std::string::npos);
}

TEST_CASE("sentiment-eval lists dropped questions with their neutral share", "[cli][sentiment]") {
  TempDir tmp;
  write_file(tmp / "r.csv", "item_id,rater_id,label,question_id\n"
                            "a,h1,neutral,Q13\na,h2,neutral,Q13\nb,h1,neutral,Q13\nb,h2,positive,Q13\n"
                            "c,h1,positive,Q15\nc,h2,positive,Q15\nd,h1,negative,Q15\nd,h2,negative,Q15\n"
                            "e,h1,positive,Q15\ne,h2,negative,Q15\nf,h1,neutral,Q16\nf,h2,neutral,Q16\n");
  write_file(tmp / "c.json", R"({"paths": {"ratings": "r.csv"}})");
  std::ostringstream log;
  auto ctx = context(tmp / "c.json", tmp, &log);
  REQUIRE(cli::cmd_sentiment_eval(ctx) == 0);
  const auto md = read_file(tmp / "out/sentiment-eval/table4.md");
  CHECK(md.find("| Q13/Q16 | 3 | 2 | 66.67% | yes |") != std::string::npos);
  CHECK(md.find("| Q15/Q18 | 3 | 0 | 0.00% | no |") != std::string::npos);
}

TEST_CASE("topics command on the planted corpus", "[cli][topics]") {
  TempDir tmp;
  std::ostringstream log;
  auto ctx = context(kCli / "planted.json", tmp, &log);
  REQUIRE(cli::cmd_topics(ctx, corpus::TranscriptSource::manual) == 0);
  const auto f = topics::load_topic_model(tmp / "out/topics/manual/planted.json");
  CHECK(f.model.topics.size() == 3);
  CHECK(f.model.coherence_umass.has_value());
  CHECK(f.speech_ids.size() == 30);
  CHECK(f.model.m_total_answers == 60);  // the "don't know" answer is filtered

  // Oracle: the topics module run directly on the same answers.
  auto answers = testing::planted_answers();
  const auto direct = topics::sweep(answers, testing::hash_matrix(answers), {});
  CHECK(direct.model.topics.size() == f.model.topics.size());
  CHECK(direct.sweep.selected == f.sweep.selected);
}

TEST_CASE("topics command skips empty question sets", "[cli][topics]") {
  TempDir tmp;
  write_file(tmp / "c.json", R"({"paths": {"responses": ")" + (kCli / "planted.jsonl").string() +
                                 R"(", "stopwords": ")" + (kRepoData / "stopwords_nl.txt").string() +
                                 R"("}, "question_sets": {"empty": ["Q99"], "planted": ["Q13", "Q16"]}})");
  std::ostringstream log;
  auto ctx = context(tmp / "c.json", tmp, &log);
  CHECK(cli::cmd_topics(ctx, corpus::TranscriptSource::manual) == 0);
  CHECK(log.str().find("'empty'") != std::string::npos);
  CHECK(std::filesystem::exists(tmp / "out/topics/manual/planted.json"));
  CHECK_FALSE(std::filesystem::exists(tmp / "out/topics/manual/empty.json"));
  const auto s = read_json(tmp / "out/topics/manual/summary.json");
  CHECK(s["sets"][0]["status"] == "skipped");
  CHECK(s["sets"][1]["status"] == "ok");
}

TEST_CASE("topics command reports a failing set and continues", "[cli][topics]") {
  TempDir tmp;
  std::string lines;
  for (int i = 0; i < 6; ++i)
    lines += R"({"id":"x)" + std::to_string(i) +
             R"(","question_id":"Q20","modality":"keyboard","transcript_source":"typed","text":"zelfde antwoord"})"
             "\n";
  write_file(tmp / "r.jsonl", read_file(kCli / "planted.jsonl") + lines);
  write_file(tmp / "c.json", R"({"paths": {"responses": "r.jsonl", "stopwords": ")" +
                                 (kRepoData / "stopwords_nl.txt").string() +
                                 R"("}, "question_sets": {"flat": ["Q20"], "planted": ["Q13", "Q16"]}})");
  std::ostringstream log;
  auto ctx = context(tmp / "c.json", tmp, &log);
  CHECK(cli::cmd_topics(ctx, corpus::TranscriptSource::manual) == 3);
  CHECK(std::filesystem::exists(tmp / "out/topics/manual/planted.json"));
  const auto s = read_json(tmp / "out/topics/manual/summary.json");
  CHECK(s["sets"][0]["status"] == "failed");
  CHECK(s["sets"][1]["status"] == "ok");
}

TEST_CASE("compare command on a self comparison", "[cli][compare]") {
  TempDir tmp;
  std::ostringstream log;
  auto ctx = context(kCli / "planted.json", tmp, &log);
  REQUIRE(cli::cmd_topics(ctx, corpus::TranscriptSource::manual) == 0);
  REQUIRE(cli::cmd_topics(ctx, corpus::TranscriptSource::automatic) == 0);
  REQUIRE(cli::cmd_compare(ctx) == 0);
  const auto j = read_json(tmp / "out/compare/compare.json");
  const auto& row = j["answer_sets"][0];
  CHECK(row["n_similar"] == 3);
  CHECK(row["pct_texts_similar"] == 100.0);
  for (const auto& m : row["matched"]) {
    CHECK(m["rho"] == 1.0);
    CHECK(m["p"] == 0.0);
  }
}

TEST_CASE("compare rows follow the configured set order", "[cli][compare]") {
  TempDir tmp;
  write_file(tmp / "c.json", R"({"paths": {"responses": ")" + (kCli / "planted.jsonl").string() +
                                 R"(", "stopwords": ")" + (kRepoData / "stopwords_nl.txt").string() +
                                 R"("}, "question_sets": {"democracy": ["Q13", "Q16"], "europe": ["Q13", "Q16"],
                                     "trust": ["Q13", "Q16"], "marriage": ["Q13", "Q16"]}})");
  std::ostringstream log;
  auto ctx = context(tmp / "c.json", tmp, &log);
  REQUIRE(cli::cmd_topics(ctx, corpus::TranscriptSource::manual) == 0);
  REQUIRE(cli::cmd_topics(ctx, corpus::TranscriptSource::automatic) == 0);
  REQUIRE(cli::cmd_compare(ctx) == 0);
  const auto md = read_file(tmp / "out/compare/table5.md");
  const auto d = md.find("| Democracy"), e = md.find("| Europe"), t = md.find("| Trust"), m = md.find("| Marriage");
  REQUIRE(m != std::string::npos);
  CHECK(d < e);
  CHECK(e < t);
  CHECK(t < m);
}

TEST_CASE("compare command without models", "[cli][compare]") {
  TempDir tmp;
  const auto r = testing::run_cli("--config " + q(kCli / "planted.json") + " --out " + q(tmp / "out") + " compare",
                                  tmp.path());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("missing topic model file") != std::string::npos);
}

TEST_CASE("noise command", "[cli][noise]") {
  SECTION("zero rates leave the text unchanged") {
    TempDir tmp;
    std::ostringstream log;
    auto ctx = context(kCli / "small.json", tmp, &log);
    REQUIRE(cli::cmd_noise(ctx, {0.0, 0.0, 0.0}) == 0);
    const auto out = corpus::ingest(tmp / "out/noise/responses.jsonl", corpus::Format::jsonl);
    std::map<std::string, std::string> manual, automatic;
    for (const auto& r : out) {
      if (r.transcript_source == corpus::TranscriptSource::manual) manual[r.id] = r.raw_text;
      if (r.transcript_source == corpus::TranscriptSource::automatic) automatic[r.id] = r.raw_text;
    }
    CHECK(manual.size() == 3);
    CHECK(automatic == manual);
  }
  SECTION("fixed seed gives an identical file, another seed does not") {
    TempDir a, b, c;
    std::ostringstream log;
    auto ca = context(kCli / "planted.json", a, &log);
    auto cb = context(kCli / "planted.json", b, &log);
    auto cc = context(kCli / "planted.json", c, &log);
    cc.config.seed = 12;
    REQUIRE(cli::cmd_noise(ca) == 0);
    REQUIRE(cli::cmd_noise(cb) == 0);
    REQUIRE(cli::cmd_noise(cc) == 0);
    CHECK(read_file(a / "out/noise/responses.jsonl") == read_file(b / "out/noise/responses.jsonl"));
    CHECK(read_file(a / "out/noise/responses.jsonl") != read_file(c / "out/noise/responses.jsonl"));
  }
  SECTION("invalid rates") {
    TempDir tmp;
    std::ostringstream log;
    auto ctx = context(kCli / "small.json", tmp, &log);
    CHECK_THROWS_AS(cli::cmd_noise(ctx, {0.8, 0.5, 0.0}), ConfigError);
  }
}

TEST_CASE("checked-in planted corpus matches its generator", "[cli][fixture]") {
  CHECK(read_file(kCli / "planted.jsonl") == corpus::to_jsonl(testing::planted_responses()));
}

TEST_CASE("exit codes", "[cli][process]") {
  TempDir tmp;
  CHECK(testing::run_cli("", tmp.path()).exit_code == 1);
  CHECK(testing::run_cli("frobnicate", tmp.path()).exit_code == 1);
  CHECK(testing::run_cli("--format yaml stats", tmp.path()).exit_code == 1);
  CHECK(testing::run_cli("--config " + q(tmp / "none.json") + " stats", tmp.path()).exit_code == 1);
  CHECK(testing::run_cli("--help", tmp.path()).exit_code == 0);
  CHECK(testing::run_cli("--config " + q(kCli / "small.json") + " --out " + q(tmp / "out") + " stats", tmp.path())
            .exit_code == 0);
}

TEST_CASE("output format selection", "[cli][process]") {
  TempDir tmp;
  const std::string base = "--config " + q(kCli / "small.json") + " --out ";
  REQUIRE(testing::run_cli(base + q(tmp / "j") + " --format json stats", tmp.path()).exit_code == 0);
  REQUIRE(testing::run_cli(base + q(tmp / "m") + " --format markdown stats", tmp.path()).exit_code == 0);
  CHECK(std::filesystem::exists(tmp / "j/stats/stats.json"));
  CHECK_FALSE(std::filesystem::exists(tmp / "j/stats/table1.md"));
  CHECK(std::filesystem::exists(tmp / "m/stats/table1.md"));
  CHECK_FALSE(std::filesystem::exists(tmp / "m/stats/stats.json"));
}

TEST_CASE("every command is byte-identical across runs", "[cli][process][determinism]") {
  TempDir tmp;
  const std::vector<std::pair<std::string, std::string>> runs{
      {"small.json", "stats"},       {"small.json", "wer"},          {"small.json", "sentiment-eval"},
      {"planted.json", "noise"},     {"planted.json", "topics"},     {"planted.json", "compare"},
      {"small.json", "noise"}};
  for (const char* run : {"a", "b"}) {
    for (const auto& [config, command] : runs) {
      const auto r = testing::run_cli("--config " + q(kCli / config) + " --out " + q(tmp / run) + " " + command,
                                      tmp.path());
      INFO(command << ": " << r.err);
      REQUIRE(r.exit_code == 0);
    }
  }
  const auto a = testing::tree(tmp / "a"), b = testing::tree(tmp / "b");
  CHECK(a.size() >= 15);
  CHECK(a == b);
}

TEST_CASE("rendered tables match the goldens", "[cli][render]") {
  TempDir tmp;
  const std::string base = " --out " + q(tmp / "out") + " --format markdown ";
  for (const auto& [config, command] :
       std::vector<std::pair<std::string, std::string>>{{"small.json", "stats"},
                                                        {"small.json", "wer"},
                                                        {"small.json", "sentiment-eval"},
                                                        {"planted.json", "topics"},
                                                        {"planted.json", "compare"}})
    REQUIRE(testing::run_cli("--config " + q(kCli / config) + base + command, tmp.path()).exit_code == 0);
  for (const char* f : {"stats/table1.md", "wer/table3.md", "sentiment-eval/table4.md", "compare/table5.md"}) {
    INFO(f);
    CHECK(read_file(tmp / "out" / f) == read_file(kGolden / f));
  }
}

namespace {

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 1;
  while (pos < line.size()) {
    auto bar = line.find('|', pos);
    if (bar == std::string::npos) break;
    auto c = line.substr(pos, bar - pos);
    c.erase(0, c.find_first_not_of(' '));
    c.erase(c.find_last_not_of(' ') + 1);
    out.push_back(c);
    pos = bar + 1;
  }
  return out;
}

// First markdown table in `text`: header cells, then the first cell of each body row.
std::pair<std::vector<std::string>, std::vector<std::string>> table_shape(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header, rows;
  bool seen_rule = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '|') {
      if (!header.empty()) break;
      continue;
    }
    if (header.empty())
      header = cells(line);
    else if (!seen_rule)
      seen_rule = true;
    else
      rows.push_back(cells(line).front());
  }
  return {header, rows};
}

}  // namespace

TEST_CASE("golden tables have the expected columns and row labels", "[cli][render]") {
  using V = std::vector<std::string>;
  auto t1 = table_shape(read_file(kGolden / "stats/table1.md"));
  CHECK(t1.first == V{"", "Speech", "Keyboard"});
  CHECK(t1.second == V{"# responses", "median # words", "average # words", "max # words", "total # words",
                       "median # content words", "average # content words", "total # content words",
                       "percentage content words"});
  CHECK(table_shape(read_file(kGolden / "wer/table3.md")).first == V{"Label", "WER", "subs", "del", "ins"});
  auto md4 = read_file(kGolden / "sentiment-eval/table4.md");
  auto t4 = table_shape(md4.substr(md4.find("| Label")));
  CHECK(t4.first == V{"Label", "Precision", "Recall", "F1"});
  CHECK(t4.second == V{"Negative", "Positive"});
  CHECK(table_shape(read_file(kGolden / "compare/table5.md")).first ==
        V{"Answer set", "# topics manual", "# topics automatic", "# topics similar", "% texts in similar cluster"});
}
