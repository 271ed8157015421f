// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "erc/trainer.hpp"

namespace erc::cli {

struct DataOptions {
  std::string corpus;
  std::string embeddings;
  std::string embeddings_avg;
  std::string sentic;
  std::string splits = "2,3,4/1/5";
};

/// Train-config flags; unset optionals keep the value from --config or the
/// defaults.
struct ModelOptions {
  std::string config_file;
  std::optional<std::string> taxonomy, encoding, pooling, fusion;
  std::optional<std::size_t> k, hidden, batch, patience, max_epochs;
  std::optional<double> lr, dropout, clip_norm;
  std::optional<std::uint64_t> seed;
  bool normalize = false;
  bool multiword = false;

  TrainConfig resolve() const;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::size_t jobs = 1;
};

int cmd_validate_corpus(Context& ctx, const DataOptions& data, const std::string& encoding);
int cmd_corpus_stats(Context& ctx, const DataOptions& data, const std::string& out_dir);
int cmd_train(Context& ctx, const DataOptions& data, const ModelOptions& model, const std::string& out_dir);
int cmd_sweep(Context& ctx, const DataOptions& data, const ModelOptions& model, const std::string& grid,
              const std::string& seeds, const std::string& cache, bool no_cache, const std::string& out_dir);
int cmd_ablate(Context& ctx, const DataOptions& data, const ModelOptions& model, const std::string& dimension,
               const std::string& seeds, const std::string& cache, bool no_cache, const std::string& out_dir);

struct DmCommandOptions {
  std::string corpus;
  std::string taxonomy = "4way";
  std::string inventory;
  std::string markers;
  bool exclude_single_token = false;
  std::string out_dir;
};
int cmd_dm_analyze(Context& ctx, const DmCommandOptions& opts);

int cmd_stats_selftest(Context& ctx);
int cmd_gradcheck(Context& ctx, std::uint64_t seed);
int cmd_report(Context& ctx, const std::vector<std::string>& sweep_dirs, const std::string& out_dir);

struct SynthCommandOptions {
  std::string kind = "context";
  std::string out_dir;
  std::uint64_t seed = 7;
  std::size_t dialogues = 0;  // 0 keeps the generator default
  std::uint32_t dim = 16;
};
int cmd_synth(Context& ctx, const SynthCommandOptions& opts);

}  // namespace erc::cli
