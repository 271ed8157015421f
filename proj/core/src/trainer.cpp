// SPDX-License-Identifier: Apache-2.0
#include "erc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "erc/error.hpp"
#include "erc/hash.hpp"
#include "erc/nn/adam.hpp"
#include "erc/nn/checkpoint.hpp"
#include "erc/nn/loss.hpp"

namespace erc {
namespace {

using json = nlohmann::json;
using Scalar = float;
constexpr std::size_t kEvalBatch = 512;

struct Featurized {
  FeatureTable<Scalar> table;
  std::vector<WindowSample> train, val, test;
  double coverage = 0.0;
};

class Featurizer {
public:
  Featurizer(const TrainConfig& config, const EmbeddingStore& store, const SenticLexicon* lexicon)
      : config_(config), store_(store), lexicon_(lexicon) {}

  std::vector<WindowSample> windows(const Corpus& corpus) {
    std::vector<WindowSample> out;
    for (const auto& w : build_context_windows(corpus, config_.k, config_.taxonomy)) {
      WindowSample s;
      for (const auto& u : w.turns()) s.turns.push_back(column(u));
      s.label = *class_index(config_.taxonomy, *w.target().label(config_.taxonomy));
      out.push_back(std::move(s));
    }
    return out;
  }

  FeatureTable<Scalar> table() const {
    FeatureTable<Scalar> t;
    const auto n = Eigen::Index(encoder_.size());
    t.encoder.resize(Eigen::Index(store_.dim()), n);
    for (Eigen::Index i = 0; i < n; ++i) t.encoder.col(i) = encoder_[std::size_t(i)].cast<Scalar>();
    if (lexicon_) {
      t.affect.resize(4, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index r = 0; r < 4; ++r)
          t.affect(r, i) = static_cast<Scalar>(affect_[std::size_t(i)].values[std::size_t(r)]);
    }
    return t;
  }

  double mean_coverage() const {
    if (affect_.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& a : affect_) acc += a.coverage();
    return acc / double(affect_.size());
  }

private:
  std::uint32_t column(const Utterance& u) {
    const auto it = index_.find(u.utt_id);
    if (it != index_.end()) return it->second;
    Eigen::VectorXd v = utterance_vector(store_, u, config_.encoding, config_.pooling);
    if (config_.normalize_vectors) {
      const double norm = v.norm();
      if (norm > 0.0) v /= norm;
    }
    encoder_.push_back(std::move(v));
    if (lexicon_) affect_.push_back(utterance_affect(u, *lexicon_, config_.multiword_lexicon));
    const auto col = static_cast<std::uint32_t>(encoder_.size() - 1);
    index_.emplace(u.utt_id, col);
    return col;
  }

  const TrainConfig& config_;
  const EmbeddingStore& store_;
  const SenticLexicon* lexicon_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<Eigen::VectorXd> encoder_;
  std::vector<AffectFeatures> affect_;
};

struct Evaluation {
  double mean_loss = 0.0;
  ClassificationMetrics metrics;
};

Evaluation evaluate(const ModelParams<Scalar>& params, const FeatureTable<Scalar>& table,
                    const std::vector<WindowSample>& samples, const TrainConfig& config) {
  const std::size_t classes = class_count(config.taxonomy);
  std::vector<Prediction> predictions;
  predictions.reserve(samples.size());
  double loss = 0.0;
  std::vector<const WindowSample*> batch;
  std::vector<std::size_t> labels;
  for (std::size_t start = 0; start < samples.size(); start += kEvalBatch) {
    const std::size_t end = std::min(samples.size(), start + kEvalBatch);
    batch.clear();
    labels.clear();
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(&samples[i]);
      labels.push_back(samples[i].label);
    }
    const auto fwd = model_forward<Scalar>(params, table, batch, config.fusion, false, nullptr);
    loss += nn::softmax_cross_entropy<Scalar>(fwd.logits, labels).loss;
    const auto pred = nn::argmax_columns<Scalar>(fwd.logits);
    for (std::size_t i = 0; i < pred.size(); ++i) predictions.push_back({labels[i], pred[i]});
  }
  if (!std::isfinite(loss)) throw DivergenceError("non-finite evaluation loss");
  Evaluation e;
  e.mean_loss = loss / double(samples.size());
  e.metrics = evaluate_metrics(predictions, classes);
  return e;
}

void check_config(const TrainConfig& c) {
  if (c.batch == 0) throw SpecError("batch size must be positive");
  if (c.hidden == 0) throw SpecError("hidden size must be positive");
  if (!(c.lr > 0.0) || !std::isfinite(c.lr)) throw SpecError("learning rate must be positive");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) throw SpecError("dropout must lie in [0, 1)");
  if (c.max_epochs == 0) throw SpecError("max_epochs must be positive");
  if (c.fusion.kind == FusionKind::blend && !c.fusion.alpha) throw SpecError("blend fusion requires alpha");
  if (c.encoding.mode == EncodingMode::hier && c.encoding.hier_aggregation == PoolingKind::wmean_pos_rev)
    throw SpecError("hierarchical aggregation supports mean and wmean_pos only");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : it->template get<T>();
}

}  // namespace

// TrainConfig ----------------------------------------------------------------

json TrainConfig::to_json() const {
  json j;
  j["taxonomy"] = std::string(erc::to_string(taxonomy));
  j["k"] = k;
  j["encoding"] = erc::to_string(encoding);
  j["pooling"] = std::string(erc::to_string(pooling));
  j["fusion"] = fusion.to_string();
  j["lr"] = lr;
  j["hidden"] = hidden;
  j["dropout"] = dropout;
  j["batch"] = batch;
  j["patience"] = effective_patience();
  j["max_epochs"] = max_epochs;
  j["seed"] = seed;
  j["clip_norm"] = clip_norm;
  j["normalize_vectors"] = normalize_vectors;
  j["multiword_lexicon"] = multiword_lexicon;
  return j;
}

TrainConfig TrainConfig::from_json(const json& j) {
  if (!j.is_object()) throw SpecError("train config must be a JSON object");
  static const std::vector<std::string> known{
      "taxonomy", "k",     "encoding", "pooling",   "fusion",    "lr",
      "hidden",   "dropout", "batch",  "patience",  "max_epochs", "seed",
      "clip_norm", "normalize_vectors", "multiword_lexicon"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw SpecError("unknown train config key '" + key + "'");
  TrainConfig c;
  try {
    c.taxonomy = parse_taxonomy(get_or<std::string>(j, "taxonomy", "4way"));
    c.k = get_or<std::size_t>(j, "k", 0);
    c.encoding = parse_encoding(get_or<std::string>(j, "encoding", "flat"));
    c.pooling = parse_pooling(get_or<std::string>(j, "pooling", "mean"));
    c.fusion = FusionSpec::parse(get_or<std::string>(j, "fusion", "none"));
    c.lr = get_or<double>(j, "lr", c.lr);
    c.hidden = get_or<std::size_t>(j, "hidden", c.hidden);
    c.dropout = get_or<double>(j, "dropout", c.dropout);
    c.batch = get_or<std::size_t>(j, "batch", c.batch);
    if (j.contains("patience") && !j["patience"].is_null()) c.patience = j["patience"].get<std::size_t>();
    c.max_epochs = get_or<std::size_t>(j, "max_epochs", c.max_epochs);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.clip_norm = get_or<double>(j, "clip_norm", c.clip_norm);
    c.normalize_vectors = get_or<bool>(j, "normalize_vectors", c.normalize_vectors);
    c.multiword_lexicon = get_or<bool>(j, "multiword_lexicon", c.multiword_lexicon);
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed train config: ") + e.what());
  }
  return c;
}

std::string TrainConfig::hash() const { return to_hex(fnv1a64(to_json().dump())); }

// RunResult ------------------------------------------------------------------

double RunResult::class_f1(Emotion e) const {
  for (const auto& [emo, f1] : per_class_f1)
    if (emo == e) return f1;
  throw IndexError("no F1 recorded for " + std::string(erc::to_string(e)));
}

json RunResult::to_json() const {
  json j;
  j["taxonomy"] = std::string(erc::to_string(taxonomy));
  j["k"] = k;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  j["weighted_f1"] = weighted_f1;
  j["accuracy"] = accuracy;
  json per_class = json::array();
  for (const auto& [e, f1] : per_class_f1)
    per_class.push_back({{"emotion", std::string(erc::to_string(e))}, {"f1", f1}});
  j["per_class_f1"] = per_class;
  j["confusion"] = confusion;
  j["best_epoch"] = best_epoch;
  j["epochs_run"] = epochs_run;
  j["train_loss"] = train_loss;
  j["val_loss"] = val_loss;
  j["val_weighted_f1"] = val_weighted_f1;
  j["train_windows"] = train_windows;
  j["val_windows"] = val_windows;
  j["test_windows"] = test_windows;
  j["lexicon_coverage"] = lexicon_coverage;
  return j;
}

RunResult RunResult::from_json(const json& j) {
  RunResult r;
  try {
    r.taxonomy = parse_taxonomy(j.at("taxonomy").get<std::string>());
    r.k = j.at("k").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.weighted_f1 = j.at("weighted_f1").get<double>();
    r.accuracy = j.at("accuracy").get<double>();
    for (const auto& entry : j.at("per_class_f1")) {
      const auto name = entry.at("emotion").get<std::string>();
      const auto e = parse_emotion(name);
      if (!e) throw FormatError("unknown emotion '" + name + "' in run result");
      r.per_class_f1.emplace_back(*e, entry.at("f1").get<double>());
    }
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
    r.best_epoch = j.at("best_epoch").get<std::size_t>();
    r.epochs_run = j.at("epochs_run").get<std::size_t>();
    r.train_loss = j.at("train_loss").get<std::vector<double>>();
    r.val_loss = j.at("val_loss").get<std::vector<double>>();
    r.val_weighted_f1 = j.at("val_weighted_f1").get<double>();
    r.train_windows = j.at("train_windows").get<std::size_t>();
    r.val_windows = j.at("val_windows").get<std::size_t>();
    r.test_windows = j.at("test_windows").get<std::size_t>();
    r.lexicon_coverage = j.value("lexicon_coverage", 0.0);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed run result: ") + e.what());
  }
  return r;
}

// Training -------------------------------------------------------------------

TrainOutcome train_model(const TrainConfig& config, const Splits& splits, const EmbeddingStore& store,
                         const SenticLexicon* lexicon) {
  check_config(config);
  if (config.fusion.kind != FusionKind::none && lexicon == nullptr)
    throw SpecError("fusion '" + config.fusion.to_string() + "' needs a lexicon");

  Featurizer featurizer(config, store, lexicon);
  Featurized data;
  data.train = featurizer.windows(splits.train);
  data.val = featurizer.windows(splits.val);
  data.test = featurizer.windows(splits.test);
  if (data.train.empty()) throw SpecError("training split has no labeled utterances");
  if (data.val.empty()) throw SpecError("validation split has no labeled utterances");
  if (data.test.empty()) throw SpecError("test split has no labeled utterances");
  data.table = featurizer.table();
  data.coverage = featurizer.mean_coverage();

  const std::size_t n_classes = class_count(config.taxonomy);
  const auto kind = config.k == 0 ? ClassifierKind::mlp : ClassifierKind::lstm;
  nn::Rng init_rng(config.seed, "trainer/init");
  auto params = ModelParams<Scalar>::init(kind, store.dim(), config.fusion, config.hidden, n_classes,
                                          config.dropout, init_rng);
  nn::AdamState<Scalar> adam;
  adam.config.lr = config.lr;
  nn::Rng shuffle_rng(config.seed, "trainer/shuffle");
  nn::Rng dropout_rng(config.seed, "trainer/dropout");

  RunResult result;
  result.taxonomy = config.taxonomy;
  result.k = config.k;
  result.seed = config.seed;
  result.config_hash = config.hash();
  result.train_windows = data.train.size();
  result.val_windows = data.val.size();
  result.test_windows = data.test.size();
  result.lexicon_coverage = data.coverage;

  std::vector<const WindowSample*> order;
  order.reserve(data.train.size());
  for (const auto& s : data.train) order.push_back(&s);

  ModelParams<Scalar> best = params;
  double best_loss = std::numeric_limits<double>::infinity();
  const std::size_t patience = config.effective_patience();
  std::vector<std::size_t> labels;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<const WindowSample*>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      std::span<const WindowSample* const> batch(order.data() + start, end - start);
      labels.clear();
      for (const auto* s : batch) labels.push_back(s->label);
      const auto fwd = model_forward<Scalar>(params, data.table, batch, config.fusion, true, &dropout_rng);
      const auto lg = nn::softmax_cross_entropy<Scalar>(fwd.logits, labels, 1.0 / double(batch.size()));
      if (!std::isfinite(lg.loss))
        throw DivergenceError("training loss became non-finite at epoch " + std::to_string(epoch));
      epoch_loss += lg.loss;
      auto grads = model_backward<Scalar>(params, data.table, fwd, config.fusion, lg.dlogits);
      if (config.clip_norm > 0.0) nn::clip_global_norm<Scalar>(grads.tensors(), config.clip_norm);
      nn::adam_step(params, grads, adam);
    }
    result.train_loss.push_back(epoch_loss / double(order.size()));
    const auto val = evaluate(params, data.table, data.val, config);
    result.val_loss.push_back(val.mean_loss);
    result.epochs_run = epoch;
    if (val.mean_loss < best_loss) {
      best_loss = val.mean_loss;
      best = params;
      result.best_epoch = epoch;
      result.val_weighted_f1 = val.metrics.weighted_f1;
    }
    if (epoch - result.best_epoch >= patience) break;
  }

  const auto test = evaluate(best, data.table, data.test, config);
  result.weighted_f1 = test.metrics.weighted_f1;
  result.accuracy = test.metrics.accuracy;
  result.confusion = test.metrics.confusion;
  const auto cls = classes(config.taxonomy);
  for (std::size_t i = 0; i < cls.size(); ++i) result.per_class_f1.emplace_back(cls[i], test.metrics.f1[i]);
  return {std::move(result), std::move(best)};
}

RunResult train_run(const TrainConfig& config, const Splits& splits, const EmbeddingStore& store,
                    const SenticLexicon* lexicon) {
  return train_model(config, splits, store, lexicon).result;
}

SeedSummary aggregate_seeds(std::span<const RunResult> results) {
  std::vector<double> values;
  values.reserve(results.size());
  for (const auto& r : results) values.push_back(r.weighted_f1);
  // Sorted so the summary does not depend on the order runs finished in.
  std::sort(values.begin(), values.end());
  return summarize_seeds(values);
}

void save_checkpoint(const std::filesystem::path& path, const TrainOutcome& outcome,
                     const TrainConfig& config) {
  nn::CheckpointHeader header;
  header.scalar_bytes = sizeof(Scalar);
  header.seed = config.seed;
  header.config_hash = config.hash();
  header.model_kind = outcome.model.kind == ClassifierKind::mlp ? "mlp" : "lstm";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path.string() + "'");
  nn::write_checkpoint<Scalar>(out, header, outcome.model.tensors());
  if (!out) throw DataError("failed writing checkpoint '" + path.string() + "'");
}

}  // namespace erc
