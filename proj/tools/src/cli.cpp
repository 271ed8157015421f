// SPDX-License-Identifier: Apache-2.0
#include "erc/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <thread>

#include "commands.hpp"
#include "erc/error.hpp"

namespace erc::cli {
namespace {

void add_data_options(CLI::App* app, DataOptions& d, bool needs_store) {
  app->add_option("--corpus", d.corpus, "Corpus JSONL file")->required();
  auto* emb = app->add_option("--embeddings", d.embeddings, "EMB1 token-embedding store");
  if (needs_store) emb->required();
  app->add_option("--sentic", d.sentic, "Affect lexicon TSV");
  app->add_option("--splits", d.splits, "train/val/test sessions, e.g. 2,3,4/1/5")->capture_default_str();
}

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--config", m.config_file, "Train config JSON (flags override it)");
  app->add_option("--taxonomy", m.taxonomy, "4way or 6way");
  app->add_option("--k", m.k, "Preceding turns of context");
  app->add_option("--encoding", m.encoding, "flat, hier, hier:mean or hier:wmean_pos");
  app->add_option("--pooling", m.pooling, "mean, wmean_pos or wmean_pos_rev");
  app->add_option("--fusion", m.fusion, "none, concat or blend:<alpha>");
  app->add_option("--lr", m.lr, "Adam learning rate");
  app->add_option("--hidden", m.hidden, "Hidden units");
  app->add_option("--dropout", m.dropout, "Dropout rate");
  app->add_option("--batch", m.batch, "Batch size");
  app->add_option("--patience", m.patience, "Early-stopping patience in epochs");
  app->add_option("--max-epochs", m.max_epochs, "Upper bound on epochs");
  app->add_option("--clip-norm", m.clip_norm, "Global gradient-norm clip (0 = off)");
  app->add_option("--seed", m.seed, "Run seed");
  app->add_flag("--normalize", m.normalize, "L2-normalize utterance vectors");
  app->add_flag("--multiword-lexicon", m.multiword, "Match multi-word lexicon concepts");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"erc-lab: context-length and discourse-marker experiments for emotion recognition"};
  app.name("erc-lab");
  app.require_subcommand(1);
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--jobs", jobs, "Parallel training jobs")->check(CLI::PositiveNumber);

  DataOptions data;
  ModelOptions model;
  std::string out_dir, grid = "default", seeds = "42..51", cache, encoding = "flat", dimension;
  bool no_cache = false;

  auto* validate = app.add_subcommand("validate-corpus", "Check a corpus (and optionally a store) for consistency");
  add_data_options(validate, data, false);
  validate->add_option("--encoding", encoding, "Also require sentence records when hier");

  auto* cstats = app.add_subcommand("corpus-stats", "Dialogue-length and sentence-count distributions");
  cstats->add_option("--corpus", data.corpus, "Corpus JSONL file")->required();
  cstats->add_option("--out", out_dir, "Output directory");

  auto* train = app.add_subcommand("train", "Train and evaluate one configuration");
  add_data_options(train, data, true);
  add_model_options(train, model);
  train->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Context-length sweep over K and seeds");
  add_data_options(sweep, data, true);
  add_model_options(sweep, model);
  sweep->add_option("--grid", grid, "default, full or a comma list of K")->capture_default_str();
  sweep->add_option("--seeds", seeds, "Seed range a..b or comma list")->capture_default_str();
  sweep->add_option("--cache", cache, "Run cache directory (default <out>/cache, or $ERC_LAB_CACHE)");
  sweep->add_flag("--no-cache", no_cache, "Disable the run cache");
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* ablate = app.add_subcommand("ablate", "Encoding/pooling/layer/fusion ablation with paired tests");
  add_data_options(ablate, data, true);
  add_model_options(ablate, model);
  ablate->add_option("--dimension", dimension, "pooling, layer_mode, fusion or encoding")->required();
  ablate->add_option("--embeddings-avg", data.embeddings_avg, "avg_last4 store for layer_mode");
  ablate->add_option("--seeds", seeds, "Seed range a..b or comma list")->capture_default_str();
  ablate->add_option("--cache", cache, "Run cache directory (default <out>/cache, or $ERC_LAB_CACHE)");
  ablate->add_flag("--no-cache", no_cache, "Disable the run cache");
  ablate->add_option("--out", out_dir, "Output directory")->required();

  DmCommandOptions dm;
  auto* dma = app.add_subcommand("dm-analyze", "Discourse-marker frequency and periphery analysis");
  dma->add_option("--corpus", dm.corpus, "Corpus JSONL file")->required();
  dma->add_option("--taxonomy", dm.taxonomy, "4way or 6way")->capture_default_str();
  dma->add_option("--inventory", dm.inventory, "marker<TAB>category file (default: built-in 20 markers)");
  dma->add_option("--markers", dm.markers, "Comma list restricting the analysis set");
  dma->add_flag("--exclude-single-token", dm.exclude_single_token, "Drop single-token utterances");
  dma->add_option("--out", dm.out_dir, "Output directory");

  auto* stats_cmd = app.add_subcommand("stats", "Statistics utilities");
  stats_cmd->require_subcommand(1);
  auto* selftest = stats_cmd->add_subcommand("selftest", "Run the fixed statistics fixtures");

  std::uint64_t grad_seed = 42;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of MLP and LSTM gradients");
  gradcheck->add_option("--seed", grad_seed, "Parameter seed")->capture_default_str();

  std::vector<std::string> sweep_dirs;
  auto* report = app.add_subcommand("report", "Summarize sweep outputs into context and per-emotion tables");
  report->add_option("--sweep", sweep_dirs, "Sweep output directory (repeatable)")->required();
  report->add_option("--out", out_dir, "Output directory")->required();

  SynthCommandOptions syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus and store");
  synth->add_option("--kind", syn.kind, "context, separable, positional or markers")
      ->check(CLI::IsMember({"context", "separable", "positional", "markers"}))
      ->capture_default_str();
  synth->add_option("--seed", syn.seed, "Generator seed")->capture_default_str();
  synth->add_option("--dialogues", syn.dialogues, "Number of dialogues");
  synth->add_option("--dim", syn.dim, "Embedding width")->capture_default_str();
  synth->add_option("--out", syn.out_dir, "Output directory")->required();

  std::vector<const char*> argv{"erc-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitUsage;
  }

  Context ctx{out, err, jobs};
  try {
    if (*validate) return cmd_validate_corpus(ctx, data, encoding);
    if (*cstats) return cmd_corpus_stats(ctx, data, out_dir);
    if (*train) return cmd_train(ctx, data, model, out_dir);
    if (*sweep) return cmd_sweep(ctx, data, model, grid, seeds, cache, no_cache, out_dir);
    if (*ablate) return cmd_ablate(ctx, data, model, dimension, seeds, cache, no_cache, out_dir);
    if (*dma) return cmd_dm_analyze(ctx, dm);
    if (*selftest) return cmd_stats_selftest(ctx);
    if (*gradcheck) return cmd_gradcheck(ctx, grad_seed);
    if (*report) return cmd_report(ctx, sweep_dirs, out_dir);
    if (*synth) return cmd_synth(ctx, syn);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace erc::cli
