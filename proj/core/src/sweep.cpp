// SPDX-License-Identifier: Apache-2.0
#include "erc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "erc/error.hpp"
#include "erc/hash.hpp"
#include "erc/log.hpp"
#include "erc/output.hpp"

namespace erc {
namespace {

/// Runs fn(0..n-1) on up to `jobs` threads. The exception of the lowest
/// failing index is rethrown once every started job has finished.
template <typename Fn>
void run_parallel(std::size_t n, std::size_t jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::size_t parse_size(std::string_view s, const char* what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw SpecError(std::string("malformed ") + what + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

SeedSummary lenient_summary(const std::vector<double>& values) {
  if (values.size() >= 2) return summarize_seeds(values);
  // A single run has no spread; the interval collapses onto the value.
  SeedSummary s;
  s.n = values.size();
  if (!values.empty()) s.mean = s.min = s.max = s.ci_low = s.ci_high = values.front();
  return s;
}

/// Runs one cell, consulting the on-disk cache first.
RunResult cached_run(const TrainConfig& config, const std::string& tag, const Splits& splits,
                     const EmbeddingStore& store, const SenticLexicon* lexicon,
                     const SweepOptions& options) {
  std::optional<std::filesystem::path> file;
  if (options.cache_dir) {
    const std::string key = config.hash() + "-" + to_hex(fnv1a64(options.data_fingerprint + "|" + tag));
    file = *options.cache_dir / ("run-" + key + ".json");
    std::error_code ec;
    if (std::filesystem::exists(*file, ec)) {
      try {
        auto cached = RunResult::from_json(nlohmann::json::parse(read_file(*file)));
        if (cached.config_hash == config.hash()) return cached;
      } catch (const std::exception& e) {
        log::warn("ignoring unreadable cache entry " + file->string() + ": " + e.what());
      }
    }
  }
  RunResult r = train_run(config, splits, store, lexicon);
  if (file) {
    std::error_code ec;
    std::filesystem::create_directories(file->parent_path(), ec);
    write_file(*file, r.to_json().dump(1) + "\n");
  }
  return r;
}

}  // namespace

// Grids ----------------------------------------------------------------------

std::vector<std::size_t> default_grid(std::size_t k_max) {
  static constexpr std::size_t kBase[] = {0, 1, 2, 3, 5, 10, 20, 30, 40, 60, 90, 100, 110, 130, 140, 200};
  std::set<std::size_t> out;
  for (std::size_t k : kBase)
    if (k <= k_max) out.insert(k);
  out.insert(k_max);
  return {out.begin(), out.end()};
}

std::vector<std::size_t> full_grid(std::size_t k_max) {
  std::vector<std::size_t> out(k_max + 1);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

void validate_grid(std::span<const std::size_t> grid, std::size_t k_max) {
  if (grid.empty()) throw SpecError("K grid is empty");
  if (grid.front() != 0) throw SpecError("K grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] == grid[i - 1]) throw SpecError("duplicate K " + std::to_string(grid[i]) + " in grid");
    if (grid[i] < grid[i - 1]) throw SpecError("K grid must be strictly increasing");
  }
  if (grid.back() > k_max)
    throw SpecError("K " + std::to_string(grid.back()) + " exceeds the longest dialogue (" +
                    std::to_string(k_max) + ")");
}

std::vector<std::size_t> parse_grid(std::string_view text, std::size_t k_max) {
  if (text == "default") return default_grid(k_max);
  if (text == "full") return full_grid(k_max);
  std::vector<std::size_t> grid;
  for (auto piece : split(text, ',')) grid.push_back(parse_size(piece, "K"));
  validate_grid(grid, k_max);
  return grid;
}

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> out(10);
  std::iota(out.begin(), out.end(), 42);
  return out;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_size(text.substr(0, dots), "seed");
    const auto hi = parse_size(text.substr(dots + 2), "seed");
    if (hi < lo) throw SpecError("empty seed range");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  } else {
    for (auto piece : split(text, ',')) out.push_back(parse_size(piece, "seed"));
  }
  std::set<std::uint64_t> unique(out.begin(), out.end());
  if (unique.size() != out.size()) throw SpecError("duplicate seed");
  return out;
}

// SweepResult ----------------------------------------------------------------

const RunResult& SweepResult::at(std::size_t k, std::uint64_t seed) const {
  const auto ki = std::find(grid.begin(), grid.end(), k);
  const auto si = std::find(seeds.begin(), seeds.end(), seed);
  if (ki == grid.end() || si == seeds.end())
    throw IndexError("no run for K=" + std::to_string(k) + " seed=" + std::to_string(seed));
  return runs[std::size_t(ki - grid.begin())][std::size_t(si - seeds.begin())];
}

std::vector<double> SweepResult::weighted_f1(std::size_t k_index) const {
  std::vector<double> out;
  for (const auto& r : runs.at(k_index)) out.push_back(r.weighted_f1);
  return out;
}

std::vector<double> SweepResult::class_f1(std::size_t k_index, std::size_t class_index) const {
  std::vector<double> out;
  for (const auto& r : runs.at(k_index)) out.push_back(r.per_class_f1.at(class_index).second);
  return out;
}

std::map<std::size_t, double> SweepResult::mean_curve() const {
  std::map<std::size_t, double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out[grid[i]] = mean_of(weighted_f1(i));
  return out;
}

std::map<std::size_t, double> SweepResult::class_mean_curve(std::size_t class_index) const {
  std::map<std::size_t, double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out[grid[i]] = mean_of(class_f1(i, class_index));
  return out;
}

std::vector<SeedSummary> SweepResult::summaries() const {
  std::vector<SeedSummary> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(lenient_summary(weighted_f1(i)));
  return out;
}

// Sweep ----------------------------------------------------------------------

SweepResult k_sweep(const TrainConfig& base, std::span<const std::size_t> grid,
                    std::span<const std::uint64_t> seeds, const Splits& splits,
                    const EmbeddingStore& store, const SenticLexicon* lexicon,
                    const SweepOptions& options) {
  std::size_t k_max = 0;
  for (const Corpus* c : {&splits.train, &splits.val, &splits.test}) k_max = std::max(k_max, c->k_max());
  validate_grid(grid, k_max);
  if (seeds.empty()) throw SpecError("no seeds given");

  SweepResult result;
  result.taxonomy = base.taxonomy;
  auto base_json = base.to_json();
  base_json.erase("k");
  base_json.erase("seed");
  if (!base.patience) base_json["patience"] = "auto";
  result.config_hash = to_hex(fnv1a64(base_json.dump()));
  result.grid.assign(grid.begin(), grid.end());
  result.seeds.assign(seeds.begin(), seeds.end());
  result.runs.assign(grid.size(), std::vector<RunResult>(seeds.size()));

  run_parallel(grid.size() * seeds.size(), options.jobs, [&](std::size_t cell) {
    const std::size_t ki = cell / seeds.size();
    const std::size_t si = cell % seeds.size();
    TrainConfig config = base;
    config.k = grid[ki];
    config.seed = seeds[si];
    result.runs[ki][si] = cached_run(config, "sweep", splits, store, lexicon, options);
    if (options.on_cell) options.on_cell(config.k, config.seed, result.runs[ki][si]);
  });
  return result;
}

// Saturation -----------------------------------------------------------------

SaturationEntry saturation_point(const std::map<std::size_t, double>& curve) {
  const auto zero = curve.find(0);
  if (zero == curve.end()) throw MissingBaselineError("curve has no K = 0 baseline");
  if (curve.size() < 2) throw DomainError("saturation needs at least two K values");
  SaturationEntry e;
  e.f1_at_zero = zero->second;
  e.k_star = 0;
  e.f1_at_k_star = zero->second;
  for (const auto& [k, f] : curve)
    if (f > e.f1_at_k_star) {
      e.k_star = k;
      e.f1_at_k_star = f;
    }
  e.delta = e.f1_at_k_star - e.f1_at_zero;
  if (!(e.delta > 0.0)) {
    e.flat = true;
    e.saturation_k = 0;
    e.target = e.f1_at_zero;
    return e;
  }
  e.target = e.f1_at_zero + 0.9 * e.delta;
  // Compare gains rather than absolute values so rescaling the curve cannot
  // flip a point lying on the threshold.
  const double needed = 0.9 * e.delta * (1.0 - 1e-12);
  for (const auto& [k, f] : curve)
    if (f - e.f1_at_zero >= needed) {
      e.saturation_k = k;
      break;
    }
  return e;
}

EmotionProfiles emotion_profiles(const SweepResult& sweep) {
  EmotionProfiles out;
  out.overall = saturation_point(sweep.mean_curve());
  const auto cls = classes(sweep.taxonomy);
  std::vector<std::vector<double>> sat_groups, delta_groups;
  for (std::size_t c = 0; c < cls.size(); ++c) {
    EmotionProfile row;
    row.emotion = cls[c];
    row.mean_curve = saturation_point(sweep.class_mean_curve(c));
    for (std::size_t s = 0; s < sweep.seeds.size(); ++s) {
      std::map<std::size_t, double> curve;
      for (std::size_t ki = 0; ki < sweep.grid.size(); ++ki)
        curve[sweep.grid[ki]] = sweep.runs[ki][s].per_class_f1.at(c).second;
      const auto entry = saturation_point(curve);
      row.seed_saturation_k.push_back(double(entry.saturation_k));
      row.seed_delta.push_back(entry.delta);
    }
    sat_groups.push_back(row.seed_saturation_k);
    delta_groups.push_back(row.seed_delta);
    out.rows.push_back(std::move(row));
  }
  try {
    out.saturation_kruskal = stats::kruskal_wallis(sat_groups);
  } catch (const DegenerateGroupError&) {
  }
  try {
    out.delta_anova = stats::anova_oneway(delta_groups);
  } catch (const DegenerateGroupError&) {
  }
  return out;
}

HeadlineK select_headline_k(const SweepResult& sweep) {
  if (sweep.grid.empty()) throw SpecError("empty sweep");
  HeadlineK h;
  double best = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    std::vector<double> val;
    for (const auto& r : sweep.runs[i]) val.push_back(r.val_weighted_f1);
    const double m = mean_of(val);
    if (m > best) {
      best = m;
      best_index = i;
    }
  }
  h.k = sweep.grid[best_index];
  h.val_weighted_f1 = best;
  h.test = lenient_summary(sweep.weighted_f1(best_index));
  return h;
}

// Ablation -------------------------------------------------------------------

std::string_view to_string(AblationDimension d) {
  switch (d) {
    case AblationDimension::pooling: return "pooling";
    case AblationDimension::layer_mode: return "layer_mode";
    case AblationDimension::fusion: return "fusion";
    case AblationDimension::encoding: return "encoding";
  }
  return "pooling";
}

AblationDimension parse_ablation_dimension(std::string_view s) {
  for (auto d : {AblationDimension::pooling, AblationDimension::layer_mode, AblationDimension::fusion,
                 AblationDimension::encoding})
    if (to_string(d) == s) return d;
  throw SpecError("unknown ablation dimension '" + std::string(s) +
                  "' (pooling, layer_mode, fusion, encoding)");
}

std::vector<AblationVariant> default_variants(AblationDimension dimension, const TrainConfig& base,
                                              const EmbeddingStore& store,
                                              const EmbeddingStore* avg_last4_store) {
  std::vector<AblationVariant> out;
  auto add = [&](std::string name, TrainConfig c, const EmbeddingStore* s) {
    out.push_back({std::move(name), std::move(c), s});
  };
  switch (dimension) {
    case AblationDimension::pooling:
      for (auto p : {PoolingKind::mean, PoolingKind::wmean_pos, PoolingKind::wmean_pos_rev}) {
        TrainConfig c = base;
        c.pooling = p;
        add(std::string(to_string(p)), c, &store);
      }
      break;
    case AblationDimension::layer_mode:
      if (avg_last4_store == nullptr) throw SpecError("layer_mode ablation needs the avg_last4 store");
      add("last", base, &store);
      add("avg_last4", base, avg_last4_store);
      break;
    case AblationDimension::fusion:
      for (const char* f : {"none", "blend:0.05", "blend:0.1", "blend:0.2", "blend:0.5", "blend:1", "concat"}) {
        TrainConfig c = base;
        c.fusion = FusionSpec::parse(f);
        add(f, c, &store);
      }
      break;
    case AblationDimension::encoding:
      for (const char* e : {"flat", "hier:mean", "hier:wmean_pos"}) {
        TrainConfig c = base;
        c.encoding = parse_encoding(e);
        add(e, c, &store);
      }
      break;
  }
  return out;
}

AblationReport compare_variants(AblationDimension dimension, std::vector<std::string> names,
                                std::vector<std::uint64_t> seeds, std::vector<std::vector<double>> scores) {
  if (names.size() < 2) throw SpecError("an ablation needs at least two variants");
  if (scores.size() != names.size()) throw ShapeError("one score row per variant expected");
  for (const auto& row : scores)
    if (row.size() != seeds.size()) throw ShapeError("one score per seed expected");
  AblationReport r;
  r.dimension = dimension;
  r.variants = std::move(names);
  r.seeds = std::move(seeds);
  r.scores = std::move(scores);
  for (const auto& row : r.scores) r.summaries.push_back(lenient_summary(row));

  if (r.variants.size() == 2) {
    r.omnibus = stats::paired_t_test(r.scores[1], r.scores[0]);
  } else {
    std::vector<std::vector<double>> matrix(r.seeds.size(), std::vector<double>(r.variants.size()));
    for (std::size_t v = 0; v < r.variants.size(); ++v)
      for (std::size_t s = 0; s < r.seeds.size(); ++s) matrix[s][v] = r.scores[v][s];
    r.omnibus = stats::friedman_test(matrix);
  }
  const std::size_t m = r.variants.size() - 1;
  std::vector<double> raw;
  for (std::size_t v = 1; v < r.variants.size(); ++v) {
    PairwiseComparison c;
    c.variant = r.variants[v];
    c.delta = r.summaries[v].mean - r.summaries[0].mean;
    c.test = stats::paired_t_test(r.scores[v], r.scores[0]);
    raw.push_back(c.test.p_value);
    r.vs_baseline.push_back(std::move(c));
  }
  const auto adjusted = stats::bonferroni(raw, m);
  for (std::size_t i = 0; i < r.vs_baseline.size(); ++i) {
    r.vs_baseline[i].test.p_value = adjusted[i];
    r.vs_baseline[i].test.correction_m = m;
  }
  return r;
}

AblationReport ablation_grid(AblationDimension dimension, const std::vector<AblationVariant>& variants,
                             std::span<const std::uint64_t> seeds, const Splits& splits,
                             const SenticLexicon* lexicon, const SweepOptions& options) {
  if (variants.size() < 2) throw SpecError("an ablation needs at least two variants");
  if (seeds.empty()) throw SpecError("no seeds given");
  std::vector<std::vector<double>> scores(variants.size(), std::vector<double>(seeds.size()));
  run_parallel(variants.size() * seeds.size(), options.jobs, [&](std::size_t cell) {
    const std::size_t vi = cell / seeds.size();
    const std::size_t si = cell % seeds.size();
    const auto& variant = variants[vi];
    if (variant.store == nullptr) throw SpecError("variant '" + variant.name + "' has no store");
    TrainConfig config = variant.config;
    config.seed = seeds[si];
    const RunResult r = cached_run(config, "ablation/" + variant.name + "/" +
                                               std::string(to_string(variant.store->layer_mode())),
                                   splits, *variant.store, lexicon, options);
    scores[vi][si] = r.weighted_f1;
    if (options.on_cell) options.on_cell(config.k, config.seed, r);
  });
  std::vector<std::string> names;
  for (const auto& v : variants) names.push_back(v.name);
  return compare_variants(dimension, std::move(names), {seeds.begin(), seeds.end()}, std::move(scores));
}

}  // namespace erc
