// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>

#include "erc/cli.hpp"
#include "erc/discourse.hpp"
#include "erc/error.hpp"
#include "erc/hash.hpp"
#include "erc/nn/gradcheck.hpp"
#include "erc/output.hpp"
#include "erc/sweep.hpp"
#include "erc/synth.hpp"

namespace erc::cli {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct LoadedData {
  Corpus corpus;
  Splits splits;
  std::optional<EmbeddingStore> store;
  std::optional<EmbeddingStore> store_avg;
  std::optional<SenticLexicon> lexicon;
  json inputs;
  std::string fingerprint;
};

LoadedData load_data(const DataOptions& d, bool need_store) {
  LoadedData out;
  out.corpus = load_corpus(d.corpus);
  out.splits = make_splits(out.corpus, SplitSpec::parse(d.splits));
  out.inputs["corpus"] = file_fingerprint(d.corpus);
  out.inputs["splits"] = SplitSpec::parse(d.splits).to_string();
  if (need_store || !d.embeddings.empty()) {
    out.store = open_store(d.embeddings);
    out.inputs["embeddings"] = file_fingerprint(d.embeddings);
  }
  if (!d.embeddings_avg.empty()) {
    out.store_avg = open_store(d.embeddings_avg);
    out.inputs["embeddings_avg"] = file_fingerprint(d.embeddings_avg);
  }
  if (!d.sentic.empty()) {
    out.lexicon = load_lexicon(d.sentic);
    out.inputs["sentic"] = file_fingerprint(d.sentic);
  }
  out.fingerprint = to_hex(fnv1a64(out.inputs.dump()));
  return out;
}

/// Writes config.json and returns the hash that CSV headers repeat.
std::string write_config(const fs::path& dir, std::string_view command, const json& config) {
  const std::string hash = to_hex(fnv1a64(config.dump()));
  json doc;
  doc["command"] = std::string(command);
  doc["config"] = config;
  doc["config_hash"] = hash;
  doc["tool"] = "erc-lab/" + std::string(tool_version());
  write_file(dir / "config.json", doc.dump(2) + "\n");
  return hash;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir.string() + "': " + ec.message());
}

std::string pct(double v) { return format_fixed(100.0 * v, 2); }

std::optional<fs::path> resolve_cache(const std::string& flag, bool disabled, const fs::path& out_dir) {
  if (disabled) return std::nullopt;
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("ERC_LAB_CACHE"); env && *env) return fs::path(env);
  return out_dir / "cache";
}

SweepOptions sweep_options(const Context& ctx, std::optional<fs::path> cache, const std::string& fingerprint,
                           std::mutex& io) {
  SweepOptions o;
  o.jobs = ctx.jobs;
  o.cache_dir = std::move(cache);
  o.data_fingerprint = fingerprint;
  std::ostream* err = &ctx.err;
  o.on_cell = [err, &io](std::size_t k, std::uint64_t seed, const RunResult& r) {
    std::lock_guard lock(io);
    *err << "  K=" << k << " seed=" << seed << " wf1=" << format_fixed(r.weighted_f1, 4)
         << " best_epoch=" << r.best_epoch << "\n";
  };
  return o;
}

json seeds_json(const std::vector<std::uint64_t>& seeds) { return json(seeds); }

void print_report(std::ostream& out, const stats::StatReport& r) {
  out << r.test << ": statistic=" << format_fixed(r.statistic, 4) << " df=" << format_fixed(r.df1, 0);
  if (r.df2) out << "," << format_fixed(*r.df2, 0);
  out << " p=" << std::setprecision(4) << r.p_value;
  if (r.effect_size) out << " V=" << format_fixed(*r.effect_size, 4);
  if (r.correction_m > 1) out << " (Bonferroni m=" << r.correction_m << ")";
  if (r.degenerate) out << " [degenerate]";
  out << "\n";
}

}  // namespace

TrainConfig ModelOptions::resolve() const {
  TrainConfig c;
  if (!config_file.empty()) {
    json j;
    try {
      j = json::parse(read_file(config_file));
    } catch (const json::exception& e) {
      throw SpecError("config file '" + config_file + "' is not valid JSON: " + e.what());
    }
    c = TrainConfig::from_json(j.contains("train") ? j["train"] : j);
  }
  if (taxonomy) c.taxonomy = parse_taxonomy(*taxonomy);
  if (encoding) c.encoding = parse_encoding(*encoding);
  if (pooling) c.pooling = parse_pooling(*pooling);
  if (fusion) c.fusion = FusionSpec::parse(*fusion);
  if (k) c.k = *k;
  if (hidden) c.hidden = *hidden;
  if (batch) c.batch = *batch;
  if (patience) c.patience = *patience;
  if (max_epochs) c.max_epochs = *max_epochs;
  if (lr) c.lr = *lr;
  if (dropout) c.dropout = *dropout;
  if (clip_norm) c.clip_norm = *clip_norm;
  if (seed) c.seed = *seed;
  if (normalize) c.normalize_vectors = true;
  if (multiword) c.multiword_lexicon = true;
  return c;
}

int cmd_validate_corpus(Context& ctx, const DataOptions& data, const std::string& encoding) {
  const Corpus corpus = load_corpus(data.corpus);
  ctx.out << "corpus ok: " << corpus.size() << " dialogues, " << corpus.utterance_count() << " utterances, "
          << corpus.labeled_count(Taxonomy::four_way) << " labeled (4way), "
          << corpus.labeled_count(Taxonomy::six_way) << " labeled (6way)\n";
  if (!data.embeddings.empty()) {
    const auto store = open_store(data.embeddings);
    const bool hier = parse_encoding(encoding).mode == EncodingMode::hier;
    std::size_t checked = 0;
    for (const auto& d : corpus.dialogues())
      for (const auto& u : d.utterances) {
        if (hier)
          for (std::size_t s = 0; s < u.sentences.size(); ++s, ++checked) store.at(sentence_key(u.utt_id, s));
        else
          store.at(u.utt_id), ++checked;
      }
    ctx.out << "store ok: dim " << store.dim() << ", layer mode " << to_string(store.layer_mode()) << ", "
            << checked << " records checked of " << store.size() << "\n";
  }
  return kExitOk;
}

int cmd_corpus_stats(Context& ctx, const DataOptions& data, const std::string& out_dir) {
  const Corpus corpus = load_corpus(data.corpus);
  const CorpusStats s = corpus_stats(corpus);
  auto dist_json = [](const Distribution& d) {
    json h = json::array();
    for (const auto& [v, n] : d.histogram) h.push_back({v, n});
    return json{{"count", d.count}, {"mean", d.mean}, {"median", d.median}, {"p95", d.p95},
                {"min", d.min},     {"max", d.max},   {"histogram", h}};
  };
  auto counts_json = [](const std::vector<std::pair<Emotion, std::size_t>>& c) {
    json j = json::object();
    for (const auto& [e, n] : c) j[std::string(to_string(e))] = n;
    return j;
  };
  json j{{"dialogues", s.dialogues},
         {"utterances", s.utterances},
         {"labeled4", s.labeled4},
         {"labeled6", s.labeled6},
         {"dialogue_lengths", dist_json(s.dialogue_lengths)},
         {"sentences_per_utterance", dist_json(s.sentences_per_utterance)},
         {"label4_counts", counts_json(s.label4_counts)},
         {"label6_counts", counts_json(s.label6_counts)}};

  auto print_dist = [&](const char* name, const Distribution& d) {
    ctx.out << name << ": n=" << d.count << " mean=" << format_fixed(d.mean, 2) << " median="
            << format_fixed(d.median, 1) << " p95=" << format_fixed(d.p95, 1) << " min=" << d.min
            << " max=" << d.max << "\n";
  };
  ctx.out << s.dialogues << " dialogues, " << s.utterances << " utterances (" << s.labeled4 << " 4way, "
          << s.labeled6 << " 6way labels)\n";
  print_dist("dialogue length (turns)", s.dialogue_lengths);
  print_dist("sentences per utterance", s.sentences_per_utterance);
  for (const auto& [e, n] : s.label4_counts) ctx.out << "  4way " << to_string(e) << ": " << n << "\n";
  for (const auto& [e, n] : s.label6_counts) ctx.out << "  6way " << to_string(e) << ": " << n << "\n";

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    const auto hash = write_config(out_dir, "corpus-stats", {{"inputs", {{"corpus", file_fingerprint(data.corpus)}}}});
    write_file(fs::path(out_dir) / "corpus_stats.json", j.dump(2) + "\n");
    auto hist_csv = [&](const char* column, const Distribution& d) {
      std::string csv = csv_meta_line(hash) + "\n" + column + ",count\n";
      for (const auto& [v, n] : d.histogram) csv += std::to_string(v) + "," + std::to_string(n) + "\n";
      return csv;
    };
    write_file(fs::path(out_dir) / "dialogue_lengths.csv", hist_csv("turns", s.dialogue_lengths));
    write_file(fs::path(out_dir) / "sentences_per_utterance.csv",
               hist_csv("sentences", s.sentences_per_utterance));
  }
  return kExitOk;
}

int cmd_train(Context& ctx, const DataOptions& data, const ModelOptions& model, const std::string& out_dir) {
  const TrainConfig config = model.resolve();
  const auto loaded = load_data(data, true);
  const auto outcome = train_model(config, loaded.splits, *loaded.store,
                                   loaded.lexicon ? &*loaded.lexicon : nullptr);
  ensure_dir(out_dir);
  write_config(out_dir, "train", {{"train", config.to_json()}, {"inputs", loaded.inputs}});
  write_file(fs::path(out_dir) / "result.json", outcome.result.to_json().dump(2) + "\n");
  save_checkpoint(fs::path(out_dir) / "model.ckpt", outcome, config);
  const auto& r = outcome.result;
  ctx.out << "weighted F1 " << format_fixed(r.weighted_f1, 4) << " (accuracy " << format_fixed(r.accuracy, 4)
          << ", best epoch " << r.best_epoch << " of " << r.epochs_run << ", " << r.test_windows
          << " test windows)\n";
  for (const auto& [e, f1] : r.per_class_f1) ctx.out << "  " << to_string(e) << " F1 " << format_fixed(f1, 4) << "\n";
  return kExitOk;
}

int cmd_sweep(Context& ctx, const DataOptions& data, const ModelOptions& model, const std::string& grid_text,
              const std::string& seeds_text, const std::string& cache, bool no_cache, const std::string& out_dir) {
  const TrainConfig base = model.resolve();
  const auto loaded = load_data(data, true);
  std::size_t k_max = 0;
  for (const Corpus* c : {&loaded.splits.train, &loaded.splits.val, &loaded.splits.test})
    k_max = std::max(k_max, c->k_max());
  const auto grid = parse_grid(grid_text, k_max);
  const auto seeds = parse_seeds(seeds_text);
  ensure_dir(out_dir);
  std::mutex io;
  const auto options = sweep_options(ctx, resolve_cache(cache, no_cache, out_dir), loaded.fingerprint, io);
  ctx.err << "sweep: " << grid.size() << " K values x " << seeds.size() << " seeds\n";
  const auto result = k_sweep(base, grid, seeds, loaded.splits, *loaded.store,
                              loaded.lexicon ? &*loaded.lexicon : nullptr, options);

  auto base_json = base.to_json();
  base_json.erase("k");
  base_json.erase("seed");
  if (!base.patience) base_json["patience"] = "auto";
  const auto hash = write_config(out_dir, "sweep",
                                 {{"train", base_json}, {"grid", grid}, {"seeds", seeds_json(seeds)},
                                  {"inputs", loaded.inputs}});
  write_file(fs::path(out_dir) / "sweep.csv", sweep_csv(result, hash));
  write_file(fs::path(out_dir) / "sweep.svg", sweep_svg(result));

  json sat;
  json summaries = json::array();
  const auto sums = result.summaries();
  for (std::size_t i = 0; i < grid.size(); ++i)
    summaries.push_back({{"k", grid[i]}, {"weighted_f1", to_json(sums[i])}});
  sat["summaries"] = summaries;
  sat["headline"] = to_json(select_headline_k(result));
  if (grid.size() >= 2) sat["profiles"] = to_json(emotion_profiles(result));
  else sat["profiles"] = nullptr;
  sat["config_hash"] = hash;
  write_file(fs::path(out_dir) / "saturation.json", sat.dump(2) + "\n");

  ctx.out << "K      mean WF1  std\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    ctx.out << std::left << std::setw(7) << grid[i] << format_fixed(sums[i].mean, 4) << "    "
            << format_fixed(sums[i].std, 4) << "\n";
  if (grid.size() >= 2) {
    const auto overall = saturation_point(result.mean_curve());
    ctx.out << "saturation K " << overall.saturation_k << " (K* " << overall.k_star << ", delta "
            << format_fixed(overall.delta, 4) << (overall.flat ? ", flat" : "") << ")\n";
  }
  return kExitOk;
}

int cmd_ablate(Context& ctx, const DataOptions& data, const ModelOptions& model, const std::string& dimension,
               const std::string& seeds_text, const std::string& cache, bool no_cache, const std::string& out_dir) {
  const TrainConfig base = model.resolve();
  const auto dim = parse_ablation_dimension(dimension);
  const auto loaded = load_data(data, true);
  const auto seeds = parse_seeds(seeds_text);
  if (dim == AblationDimension::fusion && !loaded.lexicon) throw SpecError("fusion ablation needs --sentic");
  const auto variants =
      default_variants(dim, base, *loaded.store, loaded.store_avg ? &*loaded.store_avg : nullptr);
  ensure_dir(out_dir);
  std::mutex io;
  const auto options = sweep_options(ctx, resolve_cache(cache, no_cache, out_dir), loaded.fingerprint, io);
  const auto report = ablation_grid(dim, variants, seeds, loaded.splits,
                                    loaded.lexicon ? &*loaded.lexicon : nullptr, options);
  auto base_json = base.to_json();
  base_json.erase("seed");
  const auto hash = write_config(out_dir, "ablate",
                                 {{"train", base_json}, {"dimension", dimension}, {"seeds", seeds_json(seeds)},
                                  {"inputs", loaded.inputs}});
  write_file(fs::path(out_dir) / "ablation.csv", ablation_csv(report, hash));
  auto j = to_json(report);
  j["config_hash"] = hash;
  write_file(fs::path(out_dir) / "ablation.json", j.dump(2) + "\n");

  for (std::size_t v = 0; v < report.variants.size(); ++v)
    ctx.out << std::left << std::setw(16) << report.variants[v] << "WF1 " << pct(report.summaries[v].mean)
            << " +- " << pct(report.summaries[v].std) << "\n";
  print_report(ctx.out, report.omnibus);
  for (const auto& c : report.vs_baseline) {
    ctx.out << "  " << c.variant << " vs " << report.variants.front() << ": delta " << pct(c.delta) << "pp, ";
    print_report(ctx.out, c.test);
  }
  return kExitOk;
}

int cmd_dm_analyze(Context& ctx, const DmCommandOptions& opts) {
  const Corpus corpus = load_corpus(opts.corpus);
  const auto taxonomy = parse_taxonomy(opts.taxonomy);
  const auto inventory = opts.inventory.empty() ? MarkerInventory::standard() : load_inventory(opts.inventory);
  DmOptions dm;
  dm.exclude_single_token = opts.exclude_single_token;
  if (!opts.markers.empty()) {
    std::set<std::string> subset;
    std::stringstream ss(opts.markers);
    for (std::string m; std::getline(ss, m, ',');)
      if (!m.empty()) subset.insert(m);
    dm.marker_subset = subset;
  }
  const auto report = dm_report(corpus, taxonomy, inventory, dm);

  ctx.out << "marker frequencies (" << report.utterances_scanned << " utterances scanned)\n";
  for (const auto& f : report.frequencies)
    ctx.out << "  " << std::left << std::setw(15) << f.marker << std::setw(20) << f.category << f.count << "\n";
  ctx.out << "  total " << report.frequency_total << "\n";
  ctx.out << "analysis set: " << report.occurrences.size() << " occurrences in " << report.labeled_utterances
          << " labeled utterances (" << report.single_token_occurrences << " in single-token utterances)\n";
  for (const auto& row : report.periphery)
    ctx.out << "  " << std::left << std::setw(12) << to_string(row.emotion) << "LP " << pct(row.share(Periphery::lp))
            << "%  medial " << pct(row.share(Periphery::medial)) << "%  RP " << pct(row.share(Periphery::rp))
            << "%  (n=" << row.total() << ")\n";
  if (report.association) print_report(ctx.out, *report.association);
  if (report.position_anova) print_report(ctx.out, *report.position_anova);
  for (const auto& p : report.pairwise) {
    ctx.out << "  " << to_string(p.a) << " vs " << to_string(p.b) << ": ";
    print_report(ctx.out, p.test);
  }
  for (const auto& n : report.notices) ctx.out << "note: " << n << "\n";

  if (!opts.out_dir.empty()) {
    ensure_dir(opts.out_dir);
    json cfg{{"taxonomy", std::string(to_string(taxonomy))},
             {"exclude_single_token", opts.exclude_single_token},
             {"markers", opts.markers},
             {"inputs", {{"corpus", file_fingerprint(opts.corpus)},
                         {"inventory", opts.inventory.empty() ? "standard" : file_fingerprint(opts.inventory)}}}};
    const auto hash = write_config(opts.out_dir, "dm-analyze", cfg);
    write_file(fs::path(opts.out_dir) / "dm_occurrences.csv", occurrences_csv(report, hash));
    std::string freq = csv_meta_line(hash) + "\nmarker,category,count\n";
    for (const auto& f : report.frequencies) freq += f.marker + "," + f.category + "," + std::to_string(f.count) + "\n";
    write_file(fs::path(opts.out_dir) / "dm_frequencies.csv", freq);
    auto j = to_json(report);
    j["config_hash"] = hash;
    write_file(fs::path(opts.out_dir) / "dm_report.json", j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_stats_selftest(Context& ctx) {
  bool all = true;
  for (const auto& line : stats_selftest()) {
    ctx.out << (line.passed ? "PASS " : "FAIL ") << line.name << " (" << line.detail << ")\n";
    all = all && line.passed;
  }
  return all ? kExitOk : kExitNumeric;
}

int cmd_gradcheck(Context& ctx, std::uint64_t seed) {
  constexpr double kTolerance = 1e-4;
  const auto report = nn::run_gradcheck(seed);
  auto line = [&](const char* name, const nn::GradCheckResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: max relative error %.3e over %zu coordinates (%s)\n", name,
                  r.max_relative_error, r.coordinates, r.max_relative_error < kTolerance ? "ok" : "FAILED");
    ctx.out << buf;
  };
  line("mlp 8-16-4", report.mlp);
  line("lstm d8 h16 c4 T5", report.lstm);
  const bool ok = report.mlp.max_relative_error < kTolerance && report.lstm.max_relative_error < kTolerance;
  return ok ? kExitOk : kExitNumeric;
}

int cmd_report(Context& ctx, const std::vector<std::string>& sweep_dirs, const std::string& out_dir) {
  json sweeps = json::array();
  json cfg_hashes = json::array();
  std::ostringstream md;
  std::vector<std::string> context_rows, emotion_rows;
  md << "# Context-length summary\n\n";
  md << "| taxonomy | WF1 K=0 | best K (val) | WF1 at best K | gain | saturation K |\n";
  md << "|---|---|---|---|---|---|\n";
  std::ostringstream md_emotions;
  md_emotions << "\n# Context improvement by emotion\n\n";
  md_emotions << "| taxonomy | emotion | F1 K=0 | K* | F1 at K* | delta | saturation K |\n";
  md_emotions << "|---|---|---|---|---|---|---|\n";
  for (const auto& dir : sweep_dirs) {
    const std::string text = read_file(fs::path(dir) / "sweep.csv");
    std::string hash;
    if (const auto pos = text.find("config_hash="); pos != std::string::npos)
      hash = text.substr(pos + 12, text.find(' ', pos) - pos - 12);
    const SweepResult sweep = parse_sweep_csv(text);
    if (sweep.grid.empty() || sweep.grid.front() != 0)
      throw FormatError("sweep in '" + dir + "' has no K = 0 runs");
    const auto tax = std::string(to_string(sweep.taxonomy));
    const auto sums = sweep.summaries();
    const auto headline = select_headline_k(sweep);
    json entry{{"source_config_hash", hash},
               {"taxonomy", tax},
               {"k0", to_json(sums.front())},
               {"headline", to_json(headline)}};
    std::string sat_k = "-";
    if (sweep.grid.size() >= 2) {
      const auto profiles = emotion_profiles(sweep);
      entry["profiles"] = to_json(profiles);
      sat_k = std::to_string(profiles.overall.saturation_k);
      for (const auto& row : profiles.rows) {
        const auto& m = row.mean_curve;
        md_emotions << "| " << tax << " | " << to_string(row.emotion) << " | " << pct(m.f1_at_zero) << " | "
                    << m.k_star << " | " << pct(m.f1_at_k_star) << " | " << (m.delta >= 0 ? "+" : "")
                    << pct(m.delta) << " | " << m.saturation_k << " |\n";
        emotion_rows.push_back(tax + "," + std::string(to_string(row.emotion)) + "," + format_fixed(m.f1_at_zero) +
                               "," + std::to_string(m.k_star) + "," + format_fixed(m.f1_at_k_star) + "," +
                               format_fixed(m.delta) + "," + std::to_string(m.saturation_k));
      }
    }
    md << "| " << tax << " | " << pct(sums.front().mean) << " +- " << pct(sums.front().std) << " | " << headline.k
       << " | " << pct(headline.test.mean) << " +- " << pct(headline.test.std) << " | "
       << pct(headline.test.mean - sums.front().mean) << " | " << sat_k << " |\n";
    context_rows.push_back(tax + "," + format_fixed(sums.front().mean) + "," + format_fixed(sums.front().std) + "," +
                           std::to_string(headline.k) + "," + format_fixed(headline.test.mean) + "," +
                           format_fixed(headline.test.std) + "," + sat_k);
    sweeps.push_back(std::move(entry));
    cfg_hashes.push_back(hash);
  }
  ensure_dir(out_dir);
  const auto hash = write_config(out_dir, "report", {{"sweeps", cfg_hashes}});
  std::string ctx_csv = csv_meta_line(hash) + "\ntaxonomy,wf1_k0,std_k0,best_k,wf1_best_k,std_best_k,saturation_k\n";
  for (const auto& r : context_rows) ctx_csv += r + "\n";
  std::string emo_csv = csv_meta_line(hash) + "\ntaxonomy,emotion,f1_k0,k_star,f1_k_star,delta,saturation_k\n";
  for (const auto& r : emotion_rows) emo_csv += r + "\n";
  write_file(fs::path(out_dir) / "context_summary.csv", ctx_csv);
  write_file(fs::path(out_dir) / "emotion_profiles.csv", emo_csv);
  write_file(fs::path(out_dir) / "report.json", json{{"sweeps", sweeps}, {"config_hash", hash}}.dump(2) + "\n");
  const std::string markdown = md.str() + md_emotions.str();
  write_file(fs::path(out_dir) / "report.md", markdown);
  ctx.out << markdown;
  return kExitOk;
}

int cmd_synth(Context& ctx, const SynthCommandOptions& opts) {
  ensure_dir(opts.out_dir);
  const fs::path dir = opts.out_dir;
  if (opts.kind == "markers") {
    synth::MarkerCorpusSpec spec;
    spec.seed = opts.seed;
    const auto corpus = synth::make_marker_corpus(spec);
    save_corpus(dir / "corpus.jsonl", corpus);
    ctx.out << "wrote " << corpus.size() << " dialogues to " << (dir / "corpus.jsonl").string() << "\n";
    return kExitOk;
  }
  synth::SyntheticData data;
  if (opts.kind == "context") {
    synth::ContextCorpusSpec spec;
    spec.seed = opts.seed;
    spec.dim = opts.dim;
    if (opts.dialogues) spec.dialogues = opts.dialogues;
    data = synth::make_context_corpus(spec);
  } else if (opts.kind == "separable") {
    synth::SeparableCorpusSpec spec;
    spec.seed = opts.seed;
    spec.dim = opts.dim;
    if (opts.dialogues) spec.dialogues = opts.dialogues;
    data = synth::make_separable_corpus(spec);
  } else {
    synth::PositionalCorpusSpec spec;
    spec.seed = opts.seed;
    spec.dim = opts.dim;
    if (opts.dialogues) spec.dialogues = opts.dialogues;
    data = synth::make_positional_corpus(spec);
  }
  save_corpus(dir / "corpus.jsonl", data.corpus);
  save_store(dir / "embeddings.emb", data.store);
  ctx.out << "wrote " << data.corpus.size() << " dialogues and " << data.store.size() << " embedding records to "
          << dir.string() << "\n";
  return kExitOk;
}

}  // namespace erc::cli
