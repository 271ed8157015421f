// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "erc/cli.hpp"
#include "erc/output.hpp"
#include "support.hpp"

using namespace erc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string config_hash(const fs::path& dir) {
  return nlohmann::json::parse(read_file(dir / "config.json"))["config_hash"].get<std::string>();
}

// Every CSV in `dir` must carry the hash from config.json.
void check_csv_hashes(const fs::path& dir) {
  const auto hash = config_hash(dir);
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    ++csvs;
    const auto text = read_file(e.path());
    CAPTURE(e.path().string());
    CHECK(text.substr(0, text.find('\n')) == csv_meta_line(hash));
  }
  CHECK(csvs > 0);
}

const fs::path& synth_dir() {
  static const fs::path dir = [] {
    auto d = test::scratch_dir("cli_data");
    REQUIRE(run({"synth", "--kind", "separable", "--dialogues", "10", "--out", (d / "sep").string()}).code == 0);
    REQUIRE(run({"synth", "--kind", "markers", "--out", (d / "dm").string()}).code == 0);
    return d;
  }();
  return dir;
}

std::vector<std::string> data_args() {
  return {"--corpus", (synth_dir() / "sep/corpus.jsonl").string(), "--embeddings",
          (synth_dir() / "sep/embeddings.emb").string()};
}

std::vector<std::string> small_model() {
  return {"--hidden", "8", "--max-epochs", "4", "--patience", "2", "--lr", "0.005"};
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

TEST_CASE("usage errors exit 1 with usage text") {
  const auto bad = run({"train", "--bogus"});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run(concat({{"train"}, data_args(), {"--out", "x", "--pooling", "max"}})).code == cli::kExitUsage);
  CHECK(run(concat({{"sweep"}, data_args(), {"--out", "x", "--grid", "1,2"}})).code == cli::kExitUsage);
}

TEST_CASE("data errors exit 2") {
  const auto dir = test::scratch_dir("cli_bad");
  CHECK(run({"validate-corpus", "--corpus", (dir / "missing.jsonl").string()}).code == cli::kExitData);
  write_file(dir / "bad.jsonl", "{\"dialogue_id\": 3}\n");
  const auto r = run({"validate-corpus", "--corpus", (dir / "bad.jsonl").string()});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("line 1") != std::string::npos);
  write_file(dir / "bad.emb", "EMB9");
  CHECK(run({"validate-corpus", "--corpus", (synth_dir() / "sep/corpus.jsonl").string(), "--embeddings",
             (dir / "bad.emb").string()})
            .code == cli::kExitData);
}

TEST_CASE("numeric failures exit 3") {
  const auto out = test::scratch_dir("cli_diverge");
  const auto r = run(concat({{"train"}, data_args(), {"--lr", "1e30", "--max-epochs", "3", "--out", out.string()}}));
  CHECK(r.code == cli::kExitNumeric);
}

TEST_CASE("selftest and gradcheck") {
  const auto st = run({"stats", "selftest"});
  CHECK(st.code == cli::kExitOk);
  CHECK(st.out.find("FAIL") == std::string::npos);
  CHECK(st.out.find("PASS friedman") != std::string::npos);
  const auto gc = run({"gradcheck"});
  CHECK(gc.code == cli::kExitOk);
  CHECK(std::regex_search(gc.out, std::regex("mlp .*max relative error [0-9.e+-]+")));
}

TEST_CASE("validate-corpus and corpus-stats") {
  CHECK(run(concat({{"validate-corpus"}, data_args()})).code == cli::kExitOk);
  CHECK(run(concat({{"validate-corpus"}, data_args(), {"--encoding", "hier"}})).code == cli::kExitOk);
  const auto out = test::scratch_dir("cli_stats");
  const auto r = run({"corpus-stats", "--corpus", (synth_dir() / "sep/corpus.jsonl").string(), "--out", out.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(out / "corpus_stats.json"));
  check_csv_hashes(out);
}

TEST_CASE("train reruns are byte-identical") {
  const auto a = test::scratch_dir("cli_train_a"), b = test::scratch_dir("cli_train_b");
  const auto args = concat({{"train"}, data_args(), small_model(), {"--k", "2", "--seed", "5"}});
  REQUIRE(run(concat({args, {"--out", a.string()}})).code == 0);
  REQUIRE(run(concat({args, {"--out", b.string()}})).code == 0);
  CHECK(read_file(a / "result.json") == read_file(b / "result.json"));
  CHECK(read_file(a / "config.json") == read_file(b / "config.json"));
  CHECK(read_file(a / "model.ckpt") == read_file(b / "model.ckpt"));
  const auto other = test::scratch_dir("cli_train_c");
  REQUIRE(run(concat({{"train"}, data_args(), small_model(), {"--k", "2", "--seed", "6", "--out", other.string()}})).code == 0);
  CHECK(config_hash(other) != config_hash(a));
}

TEST_CASE("sweep outputs, determinism, cache precedence and report") {
  const auto a = test::scratch_dir("cli_sweep_a"), b = test::scratch_dir("cli_sweep_b");
  const auto env_cache = test::scratch_dir("cli_sweep_env");
  const auto args = concat({{"sweep"}, data_args(), small_model(), {"--grid", "0,1,2", "--seeds", "1,2"}});
  REQUIRE(run(concat({args, {"--out", a.string(), "--no-cache"}})).code == 0);
  ::setenv("ERC_LAB_CACHE", env_cache.c_str(), 1);
  const auto rb = run(concat({{"--jobs", "2"}, args, {"--out", b.string()}}));
  ::unsetenv("ERC_LAB_CACHE");
  REQUIRE(rb.code == 0);
  CHECK(read_file(a / "sweep.csv") == read_file(b / "sweep.csv"));
  CHECK(read_file(a / "saturation.json") == read_file(b / "saturation.json"));
  CHECK(read_file(a / "sweep.svg") == read_file(b / "sweep.svg"));
  CHECK_FALSE(fs::exists(a / "cache"));
  CHECK_FALSE(fs::exists(b / "cache"));
  std::size_t cached = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(env_cache)) ++cached;
  CHECK(cached == 6);
  check_csv_hashes(a);

  // --cache beats the environment; the default is <out>/cache.
  const auto c = test::scratch_dir("cli_sweep_c");
  REQUIRE(run(concat({args, {"--out", c.string()}})).code == 0);
  CHECK(fs::exists(c / "cache"));
  CHECK(read_file(c / "sweep.csv") == read_file(a / "sweep.csv"));

  const auto sat = nlohmann::json::parse(read_file(a / "saturation.json"));
  CHECK(sat["summaries"].size() == 3);
  CHECK(sat["profiles"]["emotions"].size() == 4);

  const auto rep = test::scratch_dir("cli_report");
  const auto r = run({"report", "--sweep", a.string(), "--out", rep.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(rep / "report.md"));
  check_csv_hashes(rep);
  const auto rj = nlohmann::json::parse(read_file(rep / "report.json"));
  CHECK(rj["sweeps"][0]["source_config_hash"] == config_hash(a));
}

TEST_CASE("ablate and dm-analyze") {
  const auto out = test::scratch_dir("cli_ablate");
  const auto r = run(concat({{"ablate"}, data_args(), small_model(),
                             {"--dimension", "pooling", "--seeds", "1,2,3", "--no-cache", "--out", out.string()}}));
  CHECK(r.code == 0);
  CHECK(r.out.find("friedman") != std::string::npos);
  check_csv_hashes(out);
  CHECK(run(concat({{"ablate"}, data_args(), {"--dimension", "fusion", "--out", out.string()}})).code ==
        cli::kExitUsage);

  const auto dm_a = test::scratch_dir("cli_dm_a"), dm_b = test::scratch_dir("cli_dm_b");
  const auto corpus = (synth_dir() / "dm/corpus.jsonl").string();
  REQUIRE(run({"dm-analyze", "--corpus", corpus, "--out", dm_a.string()}).code == 0);
  REQUIRE(run({"dm-analyze", "--corpus", corpus, "--out", dm_b.string()}).code == 0);
  CHECK(read_file(dm_a / "dm_occurrences.csv") == read_file(dm_b / "dm_occurrences.csv"));
  CHECK(read_file(dm_a / "dm_report.json") == read_file(dm_b / "dm_report.json"));
  check_csv_hashes(dm_a);
}
