// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "erc/corpus.hpp"
#include "erc/discourse.hpp"
#include "erc/embedding.hpp"
#include "erc/nn/gradcheck.hpp"
#include "erc/nn/rng.hpp"
#include "erc/output.hpp"
#include "erc/special_functions.hpp"
#include "erc/stats.hpp"
#include "erc/sweep.hpp"
#include "erc/synth.hpp"
#include "erc/trainer.hpp"

using namespace erc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Gate {
  int failures = 0;
  void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !pass;
  }
  void skip(const std::string& name, const std::string& why) {
    std::printf("SKIP %s: %s\n", name.c_str(), why.c_str());
    std::fflush(stdout);
  }
};

// Rank by counting, for the Friedman reference below.
std::vector<double> count_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double y : v) {
      less += y < v[i];
      equal += y == v[i];
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

// Conover: T = (k - 1) sum_j (R_j - n(k+1)/2)^2 / (A - C).
double conover_friedman(const std::vector<std::vector<double>>& m) {
  const double n = double(m.size()), k = double(m[0].size());
  std::vector<double> R(m[0].size(), 0.0);
  double A = 0;
  for (const auto& row : m) {
    const auto r = count_ranks(row);
    for (std::size_t j = 0; j < r.size(); ++j) {
      R[j] += r[j];
      A += r[j] * r[j];
    }
  }
  const double C = n * k * (k + 1) * (k + 1) / 4.0;
  double ss = 0;
  for (double Rj : R) ss += (Rj - n * (k + 1) / 2.0) * (Rj - n * (k + 1) / 2.0);
  return (k - 1) * ss / (A - C);
}

void gradient_correctness(Gate& gate) {
  const auto t0 = Clock::now();
  const auto r = nn::run_gradcheck(42);
  const double secs = seconds_since(t0);
  const bool pass = r.mlp.max_relative_error < 1e-4 && r.lstm.max_relative_error < 1e-4 && secs < 30.0;
  gate.report("gradient correctness", pass,
              "mlp 8-16-4 max rel err " + fmt("%.2e", r.mlp.max_relative_error) + ", lstm d8 h16 c4 T5 " +
                  fmt("%.2e", r.lstm.max_relative_error) + " (< 1e-4), " + fmt("%.2f", secs) + " s (< 30 s)");
}

void statistics_oracles(Gate& gate) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  const auto t = stats::paired_t_test(std::vector<double>{2, 4, 6}, std::vector<double>{1, 2, 3});
  need(std::abs(t.statistic - 3.464) < 1e-3 && std::abs(t.p_value - 0.0742) < 1e-3, "paired t");
  const auto f = stats::anova_oneway({{1, 2}, {3, 4}});
  need(f.statistic == 8.0 && std::abs(f.p_value - 0.106) < 1e-3, "anova");
  const auto c = stats::chi_square_cramers_v({{10, 0}, {0, 10}});
  need(c.statistic == 20.0 && c.effect_size && *c.effect_size == 1.0, "chi-square/V");
  const auto h = stats::kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
  need(std::abs(h.statistic - 3.857) < 1e-3, "kruskal-wallis");
  const std::vector<std::vector<double>> m{{.652, .641, .660}, {.648, .639, .661}, {.655, .650, .650},
                                           {.661, .645, .667}, {.640, .640, .652}, {.658, .642, .663}};
  const auto fr = stats::friedman_test(m);
  const double ref = conover_friedman(m);
  need(std::abs(fr.statistic - ref) < 1e-6 && std::abs(fr.statistic - 8.272727272727268) < 1e-6 &&
           std::abs(fr.p_value - 0.01598085818548343) < 1e-6,
       "friedman");
  const auto b = stats::bonferroni(std::vector<double>{0.01, 0.3, 0.6});
  need(b.size() == 3 && std::abs(b[0] - 0.03) < 1e-15 && std::abs(b[1] - 0.9) < 1e-15 && b[2] == 1.0,
       "bonferroni");
  double worst = 0;
  for (double df : {1.0, 2.0, 5.0, 10.0, 30.0, 100.0})
    for (double x = -8.0; x <= 8.0; x += 0.25)
      worst = std::max(worst, std::abs(stats::t_two_sided_p(x, df) - stats::f_sf(x * x, 1.0, df)));
  need(worst < 1e-9, "t-F identity");
  std::string detail = "t=" + fmt("%.4f", t.statistic) + " p=" + fmt("%.4f", t.p_value) +
                       "; F=" + fmt("%.1f", f.statistic) + " p=" + fmt("%.4f", f.p_value) +
                       "; chi2=" + fmt("%.1f", c.statistic) + " V=" + fmt("%.1f", c.effect_size.value_or(-1)) +
                       "; H=" + fmt("%.4f", h.statistic) + "; Friedman " + fmt("%.9f", fr.statistic) +
                       " vs reference " + fmt("%.9f", ref) + "; t-F max dev " + fmt("%.1e", worst);
  if (!bad.empty()) {
    detail += "; failing:";
    for (const auto& x : bad) detail += " " + x;
  }
  gate.report("statistics oracle suite", bad.empty(), detail);
}

void pooling_periphery(Gate& gate) {
  nn::Rng rng(2024, "acceptance/pooling");
  double identity_err = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = Eigen::Index(1 + rng.below(32)), n = Eigen::Index(1 + rng.below(64));
    Eigen::VectorXd row(d);
    for (auto& x : row) x = rng.uniform(-5, 5);
    const Eigen::MatrixXd rows = row.transpose().replicate(n, 1);
    for (auto kind : {PoolingKind::mean, PoolingKind::wmean_pos, PoolingKind::wmean_pos_rev})
      identity_err = std::max(identity_err, (pool_rows(rows, kind) - row).cwiseAbs().maxCoeff());
  }
  double norm_err = 0;
  for (std::size_t n = 1; n <= 1000; ++n)
    for (auto dir : {WeightDirection::forward, WeightDirection::reverse}) {
      const auto w = position_weights(n, dir);
      double s = 0;
      for (double x : w) s += x;
      norm_err = std::max(norm_err, std::abs(s - 1.0));
    }
  std::size_t grid_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(60), start = rng.below(n);
    const double pos = n == 1 ? 0.0 : double(start) / double(n - 1);
    const Periphery want = pos < 0.15 ? Periphery::lp : pos > 0.85 ? Periphery::rp : Periphery::medial;
    const auto got = position_and_periphery(start, n);
    grid_bad += got.periphery != want || got.position != pos;
  }
  std::size_t cases = 0, mismatches = 0;
  std::ifstream in(std::string(ERC_LAB_TEST_DATA) + "/marker_spans.tsv");
  const auto inv = MarkerInventory::standard();
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    std::string got;
    for (const auto& mm : match_markers(tokenize(line.substr(0, tab)), inv))
      got += (got.empty() ? "" : "|") + mm.marker + ":" + std::to_string(mm.start);
    if (got.empty()) got = "-";
    mismatches += got != line.substr(tab + 1);
    ++cases;
  }
  const bool pass = identity_err < 1e-12 && norm_err < 1e-12 && grid_bad == 0 && cases == 50 && mismatches == 0;
  gate.report("pooling/periphery properties", pass,
              "constant-row identity err " + fmt("%.1e", identity_err) + ", weight sum err " + fmt("%.1e", norm_err) +
                  ", periphery grid " + std::to_string(1000 - grid_bad) + "/1000 exact, marker fixture " +
                  std::to_string(cases) + " utterances with " + std::to_string(mismatches) + " mismatches");
}

TrainConfig context_config() {
  TrainConfig c;
  c.hidden = 32;
  c.lr = 5e-3;
  c.patience = 10;
  c.max_epochs = 80;
  c.batch = 64;
  return c;
}

void synthetic_context(Gate& gate) {
  const auto t0 = Clock::now();
  const auto data = synth::make_context_corpus({});
  const auto splits = make_splits(data.corpus, SplitSpec::standard());
  const std::vector<std::size_t> grid{0, 1, 2, 5, 10, 20};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  SweepOptions opts;
  opts.jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto sweep = k_sweep(context_config(), grid, seeds, splits, data.store, nullptr, opts);
  const auto curve = sweep.mean_curve();
  const auto sat = saturation_point(curve);
  const double secs = seconds_since(t0);
  bool gains_ok = true;
  std::string gains;
  for (std::size_t k : grid) {
    if (k < 5) continue;
    const double g = curve.at(k) - curve.at(0);
    gains_ok = gains_ok && g > 0.15;
    gains += " K=" + std::to_string(k) + ":" + fmt("%+.3f", g);
  }
  const bool sat_ok = sat.saturation_k == 5 || sat.saturation_k == 10;
  gate.report("synthetic context effect", gains_ok && sat_ok && secs < 600.0,
              "WF1(0)=" + fmt("%.3f", curve.at(0)) + ", gains over K=0" + gains + " (> 0.15), saturation K=" +
                  std::to_string(sat.saturation_k) + " (in {5,10}), " + std::to_string(data.corpus.size()) +
                  " dialogues, 3 seeds, " + fmt("%.1f", secs) + " s (< 600 s)");
}

void synthetic_discourse(Gate& gate) {
  const auto inv = MarkerInventory::standard();
  synth::MarkerCorpusSpec skewed_spec;
  skewed_spec.medial_emotion = Emotion::sad;
  const auto skewed = dm_report(synth::make_marker_corpus(skewed_spec), Taxonomy::four_way, inv);
  double worst_sad = 0;
  std::size_t sad_pairs = 0;
  for (const auto& p : skewed.pairwise)
    if (p.a == Emotion::sad || p.b == Emotion::sad) {
      worst_sad = std::max(worst_sad, p.test.p_value);
      ++sad_pairs;
    }
  const auto plain = dm_report(synth::make_marker_corpus({}), Taxonomy::four_way, inv);
  const bool plain_zero = plain.association && plain.association->statistic == 0.0 &&
                          plain.association->effect_size && *plain.association->effect_size == 0.0;
  const bool pass = skewed.occurrences.size() == 500 && sad_pairs == 3 && worst_sad < 0.05 && plain_zero;
  gate.report("synthetic discourse association", pass,
              std::to_string(skewed.occurrences.size()) + " occurrences; sad-medial pairs max Bonferroni p " +
                  fmt("%.2e", worst_sad) + " (< 0.05); unskewed chi2=" +
                  fmt("%.3f", plain.association ? plain.association->statistic : -1.0) + " V=" +
                  fmt("%.3f", plain.association ? plain.association->effect_size.value_or(-1) : -1.0));
}

void determinism(Gate& gate) {
  synth::SeparableCorpusSpec spec;
  spec.dialogues = 20;
  const auto data = synth::make_separable_corpus(spec);
  const auto splits = make_splits(data.corpus, SplitSpec::standard());
  auto config = context_config();
  config.max_epochs = 10;
  config.k = 3;
  const auto a = train_run(config, splits, data.store).to_json().dump(2);
  const auto b = train_run(config, splits, data.store).to_json().dump(2);
  const std::vector<std::size_t> grid{0, 1, 2};
  const std::vector<std::uint64_t> seeds{7, 8};
  SweepOptions serial, parallel;
  parallel.jobs = 3;
  config.max_epochs = 6;
  const auto s1 = sweep_csv(k_sweep(config, grid, seeds, splits, data.store, nullptr, serial), "h");
  const auto s2 = sweep_csv(k_sweep(config, grid, seeds, splits, data.store, nullptr, parallel), "h");
  gate.report("determinism", a == b && s1 == s2,
              std::string("train result.json ") + (a == b ? "identical" : "differs") + " (" +
                  std::to_string(a.size()) + " bytes); sweep.csv jobs=1 vs jobs=3 " +
                  (s1 == s2 ? "identical" : "differs") + " (" + std::to_string(s1.size()) + " bytes)");
}

// Full-scale reproduction. Expects $ERC_LAB_IEMOCAP/corpus.jsonl plus the
// Sentence-RoBERTa stores srob_last.emb and srob_avg_last4.emb.
void iemocap(Gate& gate) {
  const char* root = std::getenv("ERC_LAB_IEMOCAP");
  const std::string name = "IEMOCAP reproduction";
  if (!root || !*root) {
    gate.skip(name, "ERC_LAB_IEMOCAP not set");
    return;
  }
  const fs::path dir(root);
  const auto corpus = load_corpus(dir / "corpus.jsonl");
  const auto dm = dm_report(corpus, Taxonomy::four_way, MarkerInventory::standard());
  std::size_t and_count = 0;
  for (const auto& f : dm.frequencies)
    if (f.marker == "and") and_count = f.count;
  auto within = [](double got, double want, double rel) { return std::abs(got - want) <= rel * want; };
  const bool counts_ok = within(double(and_count), 2372, 0.02) && within(double(dm.frequency_total), 8955, 0.02);
  const double v = dm.association && dm.association->effect_size ? *dm.association->effect_size : -1;
  const bool v_ok = std::abs(v - 0.062) <= 0.015 && dm.association && dm.association->p_value < 0.001;
  gate.report(name + " (discourse)", counts_ok && v_ok,
              "\"and\"=" + std::to_string(and_count) + " total=" + std::to_string(dm.frequency_total) +
                  " (within 2% of 2372/8955), V=" + fmt("%.4f", v) + " (0.062 +- 0.015)");

  if (!fs::exists(dir / "srob_last.emb") || !fs::exists(dir / "srob_avg_last4.emb")) {
    gate.skip(name + " (recognition)", "srob_last.emb / srob_avg_last4.emb not found");
    return;
  }
  const auto splits = make_splits(corpus, SplitSpec::standard());
  const auto last = open_store(dir / "srob_last.emb");
  const auto avg = open_store(dir / "srob_avg_last4.emb");
  SweepOptions opts;
  opts.jobs = std::max(1u, std::thread::hardware_concurrency());
  TrainConfig base;
  base.pooling = PoolingKind::wmean_pos;
  const auto k0 = k_sweep(base, std::vector<std::size_t>{0}, default_seeds(), splits, last, nullptr, opts);
  const double t1 = k0.summaries()[0].mean * 100;
  base.pooling = PoolingKind::mean;
  const auto best = k_sweep(base, std::vector<std::size_t>{0, 132}, default_seeds(), splits, avg, nullptr, opts);
  const double t2 = best.summaries()[1].mean * 100;
  const auto profiles = emotion_profiles(best);
  Emotion largest = Emotion::neutral;
  double largest_delta = -1;
  for (const auto& row : profiles.rows)
    if (row.mean_curve.delta > largest_delta) {
      largest_delta = row.mean_curve.delta;
      largest = row.emotion;
    }
  const bool pass = std::abs(t1 - 65.29) <= 2.0 && std::abs(t2 - 82.69) <= 1.5 && largest == Emotion::sad;
  gate.report(name + " (recognition)", pass,
              "K=0 flat/last/wmean_pos WF1 " + fmt("%.2f", t1) + " (65.29 +- 2.0), K=132 flat/avg_last4/mean " +
                  fmt("%.2f", t2) + " (82.69 +- 1.5), largest per-class delta " + std::string(to_string(largest)));
}

}  // namespace

int main() {
  Gate gate;
  const std::vector<std::pair<const char*, std::function<void(Gate&)>>> checks{
      {"gradient correctness", gradient_correctness},
      {"statistics oracle suite", statistics_oracles},
      {"pooling/periphery properties", pooling_periphery},
      {"synthetic context effect", synthetic_context},
      {"synthetic discourse association", synthetic_discourse},
      {"determinism", determinism},
      {"IEMOCAP reproduction", iemocap}};
  for (const auto& [name, fn] : checks) {
    try {
      fn(gate);
    } catch (const std::exception& e) {
      gate.report(name, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%s: %d failing criteria\n", gate.failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED", gate.failures);
  return gate.failures ? 1 : 0;
}
