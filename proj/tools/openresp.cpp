#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "openresp/cli/commands.hpp"
#include "openresp/cli/config.hpp"

namespace cli = openresp::cli;

int main(int argc, char** argv) {
  CLI::App app{"openresp: analysis of open-ended survey answers"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "both";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "Run configuration (JSON)");
  app.add_option("--seed", seed, "Seed for every random draw");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "markdown", "both"}));
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Word and content-word counts per input modality");
  auto* wer = app.add_subcommand("wer", "Word error rate of automatic against manual transcripts");
  auto* sentiment = app.add_subcommand("sentiment-eval", "Rater agreement and machine-rater scores");
  auto* topics = app.add_subcommand("topics", "Topic models per question set");
  std::string dataset = "both";
  topics->add_option("--dataset", dataset, "Transcript source for speech answers")
      ->check(CLI::IsMember({"manual", "automatic", "both"}));
  auto* compare = app.add_subcommand("compare", "Match manual and automatic topic models");
  auto* noise = app.add_subcommand("noise", "Write a responses file with noised automatic transcripts");
  cli::NoiseRates rates;
  noise->add_option("--del-rate", rates.del, "Deletion rate");
  noise->add_option("--sub-rate", rates.sub, "Substitution rate");
  noise->add_option("--ins-rate", rates.ins, "Insertion rate");
  auto* all = app.add_subcommand("all", "stats, wer, sentiment-eval, topics and compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    cli::Context ctx;
    ctx.config = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
    if (seed) ctx.config.seed = *seed;
    if (!out_dir.empty()) ctx.config.output_dir = out_dir;
    if (threads) ctx.config.threads = *threads;
    ctx.format = cli::parse_format(format);
    cli::validate(ctx.config);

    if (stats->parsed()) return cli::cmd_stats(ctx);
    if (wer->parsed()) return cli::cmd_wer(ctx);
    if (sentiment->parsed()) return cli::cmd_sentiment_eval(ctx);
    if (topics->parsed()) {
      using openresp::corpus::TranscriptSource;
      int rc = 0;
      if (dataset != "automatic") rc = std::max(rc, cli::cmd_topics(ctx, TranscriptSource::manual));
      if (dataset != "manual") rc = std::max(rc, cli::cmd_topics(ctx, TranscriptSource::automatic));
      return rc;
    }
    if (compare->parsed()) return cli::cmd_compare(ctx);
    if (noise->parsed()) return cli::cmd_noise(ctx, rates);
    if (all->parsed()) return cli::cmd_all(ctx);
  } catch (const openresp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
